#include "argprobe/manifest.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>
#include <sstream>

#include <openssl/evp.h>

#include "argprobe/error.hpp"

namespace argprobe {

std::string sha256_hex(std::string_view bytes) {
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1 ||
      EVP_DigestUpdate(ctx.get(), bytes.data(), bytes.size()) != 1 ||
      EVP_DigestFinal_ex(ctx.get(), digest.data(), &len) != 1) {
    throw Error("sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string sha256_file(const std::filesystem::path& path) { return sha256_hex(read_file(path)); }

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) throw Error("failed writing " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw Error("cannot move " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

nlohmann::json Manifest::to_json() const {
  nlohmann::ordered_json j;
  j["stage"] = stage;
  j["tool_version"] = tool_version;
  j["dataset_hash"] = dataset_hash;
  j["output_hash"] = output_hash;
  j["inputs"] = inputs;
  j["config"] = config;
  j["summary"] = summary;
  return j;
}

Manifest Manifest::from_json(const nlohmann::json& j) {
  Manifest m;
  try {
    m.stage = j.at("stage").get<std::string>();
    m.tool_version = j.at("tool_version").get<std::string>();
    m.dataset_hash = j.at("dataset_hash").get<std::string>();
    m.output_hash = j.at("output_hash").get<std::string>();
    m.inputs = j.at("inputs").get<std::map<std::string, std::string>>();
    m.config = j.value("config", nlohmann::json::object());
    m.summary = j.value("summary", nlohmann::json::object());
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("malformed manifest: ") + e.what());
  }
  return m;
}

std::filesystem::path manifest_path(const std::filesystem::path& output) {
  auto p = output;
  p += ".manifest.json";
  return p;
}

void write_with_manifest(const std::filesystem::path& output, std::string_view content, Manifest manifest) {
  manifest.output_hash = sha256_hex(content);
  write_file_atomic(output, content);
  write_file_atomic(manifest_path(output), manifest.to_json().dump(2) + "\n");
}

Manifest load_verified_manifest(const std::filesystem::path& output) {
  auto mpath = manifest_path(output);
  if (!std::filesystem::exists(mpath)) {
    throw Error("missing manifest " + mpath.string() + " (produce the file with this tool)");
  }
  Manifest m;
  try {
    m = Manifest::from_json(nlohmann::json::parse(read_file(mpath)));
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("malformed manifest " + mpath.string() + ": " + e.what());
  }
  if (sha256_file(output) != m.output_hash) {
    throw Error(output.string() + " does not match its manifest (modified after it was written)");
  }
  return m;
}

std::string utc_timestamp() {
  auto now = std::chrono::system_clock::now();
  std::time_t t = std::chrono::system_clock::to_time_t(now);
  auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(now.time_since_epoch()).count() % 1000;
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[40];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%S", &tm);
  char out[48];
  std::snprintf(out, sizeof out, "%s.%03dZ", buf, static_cast<int>(ms));
  return out;
}

}  // namespace argprobe
