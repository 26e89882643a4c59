#include "argprobe/annotation_server.hpp"

#include <sstream>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "argprobe/annotation_store.hpp"
#include "argprobe/error.hpp"

namespace argprobe {

using nlohmann::json;

struct AnnotationServer::Impl {
  AnnotationStore& store;
  httplib::Server http;

  explicit Impl(AnnotationStore& s) : store(s) { routes(); }

  static void reply(httplib::Response& res, int status, const json& body) {
    res.status = status;
    res.set_content(body.dump(), "application/json; charset=utf-8");
  }

  static json session_json(const SessionView& v) {
    return {{"session_id", v.session_id}, {"annotator_id", v.annotator_id}, {"state", to_string(v.state)},
            {"rated", v.rated},           {"total", v.total},               {"warmup_items", v.warmup_items}};
  }

  static json item_json(const ServedItem& item) {
    if (item.done) return {{"done", true}, {"position", item.position}, {"total", item.total}};
    return {{"done", false},
            {"item", item.position},
            {"position", item.position + 1},
            {"total", item.total},
            {"text", item.text},
            {"warmup", item.warmup},
            {"instruction", kRatingInstruction},
            {"scale", {{"min", kMinRating}, {"max", kMaxRating}, {"min_label", kScaleMinLabel}, {"max_label", kScaleMaxLabel}}}};
  }

  template <typename F>
  static auto guarded(F f) {
    return [f](const httplib::Request& req, httplib::Response& res) {
      try {
        f(req, res);
      } catch (const json::exception& e) {
        reply(res, 400, {{"error", std::string("malformed request: ") + e.what()}});
      } catch (const LookupError& e) {
        reply(res, 404, {{"error", e.what()}});
      } catch (const RejectedError& e) {
        reply(res, 409, {{"error", e.what()}});
      } catch (const SchemaError& e) {
        reply(res, 400, {{"error", e.what()}});
      } catch (const std::exception& e) {
        reply(res, 500, {{"error", e.what()}});
      }
    };
  }

  void routes() {
    http.Get("/v1/health", guarded([this](const httplib::Request&, httplib::Response& res) {
               reply(res, 200, {{"status", "ok"}, {"sessions", store.session_count()}});
             }));

    http.Post("/v1/sessions", guarded([this](const httplib::Request& req, httplib::Response& res) {
                auto body = json::parse(req.body);
                if (!body.is_object() || !body.contains("annotator_id") || !body["annotator_id"].is_string()) {
                  throw SchemaError("annotator_id (string) is required");
                }
                std::optional<std::uint64_t> seed;
                if (body.contains("seed")) seed = body["seed"].get<std::uint64_t>();
                auto v = store.create_session(body["annotator_id"].get<std::string>(), seed);
                reply(res, 201, session_json(v));
              }));

    http.Get(R"(/v1/sessions/([A-Za-z0-9_-]+))", guarded([this](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, session_json(store.session(req.matches[1].str())));
             }));

    http.Get(R"(/v1/sessions/([A-Za-z0-9_-]+)/next)",
             guarded([this](const httplib::Request& req, httplib::Response& res) {
               reply(res, 200, item_json(store.next_item(req.matches[1].str())));
             }));

    http.Post(R"(/v1/sessions/([A-Za-z0-9_-]+)/ratings)",
              guarded([this](const httplib::Request& req, httplib::Response& res) {
                const auto session_id = req.matches[1].str();
                auto body = json::parse(req.body);
                if (!body.is_object()) throw SchemaError("expected a JSON object");
                const auto& item = body.at("item");
                const auto& value = body.at("value");
                if (!item.is_number_unsigned() && !(item.is_number_integer() && item.get<long long>() >= 0)) {
                  throw SchemaError("item must be a non-negative integer position");
                }
                if (!value.is_number_integer()) {
                  if (value.is_number()) throw RejectedError("rating must be an integer in 0..99");
                  throw SchemaError("value must be an integer");
                }
                const auto v = value.get<long long>();
                if (v < kMinRating || v > kMaxRating) throw RejectedError("rating outside the range 0..99");
                auto sentence = store.item_sentence(session_id, item.get<std::size_t>());
                auto next = store.submit_rating(session_id, sentence, static_cast<int>(v));
                reply(res, 200, {{"accepted", true}, {"next", item_json(next)}});
              }));

    http.Get("/v1/export", guarded([this](const httplib::Request&, httplib::Response& res) {
               std::ostringstream out;
               store.export_annotations(out);
               res.status = 200;
               res.set_content(out.str(), "text/tab-separated-values; charset=utf-8");
             }));
  }
};

AnnotationServer::AnnotationServer(AnnotationStore& store) : impl_(std::make_unique<Impl>(store)) {}
AnnotationServer::~AnnotationServer() { stop(); }

int AnnotationServer::bind_any_port(const std::string& host) { return impl_->http.bind_to_any_port(host); }
bool AnnotationServer::bind(const std::string& host, int port) { return impl_->http.bind_to_port(host, port); }
bool AnnotationServer::run() { return impl_->http.listen_after_bind(); }
void AnnotationServer::stop() {
  if (impl_) impl_->http.stop();
}
bool AnnotationServer::wait_until_ready() const {
  impl_->http.wait_until_ready();
  return impl_->http.is_running();
}

}  // namespace argprobe
