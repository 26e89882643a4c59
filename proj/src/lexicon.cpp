#include "argprobe/lexicon.hpp"

#include <fstream>
#include <istream>

#include <nlohmann/json.hpp>

#include "argprobe/error.hpp"

namespace argprobe {

char case_code(Case c) {
  switch (c) {
    case Case::Nom: return 'N';
    case Case::Acc: return 'A';
    case Case::Dat: return 'D';
  }
  return '?';
}

Case case_from_code(char code) {
  switch (code) {
    case 'N': return Case::Nom;
    case 'A': return Case::Acc;
    case 'D': return Case::Dat;
    default: throw SchemaError(std::string("unknown case code '") + code + "'");
  }
}

std::string_view case_name(Case c) {
  switch (c) {
    case Case::Nom: return "nom";
    case Case::Acc: return "acc";
    case Case::Dat: return "dat";
  }
  return "?";
}

std::string_view to_string(DeterminerClass d) {
  return d == DeterminerClass::Definite ? "definite" : "indefinite";
}

std::string_view to_string(Animacy a) { return a == Animacy::Human ? "human" : "inanimate"; }

DeterminerClass determiner_class_from_string(std::string_view s) {
  if (s == "definite") return DeterminerClass::Definite;
  if (s == "indefinite") return DeterminerClass::Indefinite;
  throw SchemaError("unknown determiner_class '" + std::string(s) + "'");
}

Animacy animacy_from_string(std::string_view s) {
  if (s == "human") return Animacy::Human;
  if (s == "inanimate") return Animacy::Inanimate;
  throw SchemaError("unknown animacy '" + std::string(s) + "'");
}

DeterminerTable::DeterminerTable() {
  forms_[0] = {"der", "den", "dem"};
  forms_[1] = {"ein", "einen", "einem"};
}

const std::string& DeterminerTable::at(DeterminerClass d, Case c) const {
  return forms_[static_cast<int>(d)][static_cast<int>(c)];
}

void DeterminerTable::set(DeterminerClass d, Case c, std::string form) {
  if (form.empty()) throw SchemaError("empty determiner form");
  forms_[static_cast<int>(d)][static_cast<int>(c)] = std::move(form);
}

void Lexicon::add(Lexeme lexeme) {
  if (lexeme.id.empty()) throw SchemaError("lexeme with empty id");
  for (Case c : kAllCases) {
    if (lexeme.form(c).empty()) {
      throw SchemaError("lexeme '" + lexeme.id + "': missing field '" +
                        std::string(case_name(c)) + "'");
    }
  }
  auto id = lexeme.id;
  if (!lexemes_.emplace(id, std::move(lexeme)).second) {
    throw SchemaError("duplicate lexeme id '" + id + "'");
  }
}

const Lexeme* Lexicon::find(std::string_view id) const {
  auto it = lexemes_.find(id);
  return it == lexemes_.end() ? nullptr : &it->second;
}

const Lexeme& Lexicon::at(std::string_view id) const {
  if (const Lexeme* lx = find(id)) return *lx;
  throw LookupError("unknown lexeme id '" + std::string(id) + "'");
}

namespace {

std::string required_string(const nlohmann::json& rec, const char* field, const std::string& id,
                            std::size_t line_no) {
  auto it = rec.find(field);
  if (it == rec.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw SchemaError("lexicon line " + std::to_string(line_no) + ": lexeme '" + id +
                      "': missing field '" + field + "'");
  }
  return it->get<std::string>();
}

}  // namespace

Lexicon load_lexicon(std::istream& in) {
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    nlohmann::json rec;
    try {
      rec = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw SchemaError("lexicon line " + std::to_string(line_no) + ": " + e.what());
    }
    if (!rec.is_object()) {
      throw SchemaError("lexicon line " + std::to_string(line_no) + ": expected an object");
    }
    std::string id = rec.contains("id") && rec["id"].is_string() ? rec["id"].get<std::string>()
                                                                  : std::string("<no id>");
    Lexeme lx;
    lx.id = required_string(rec, "id", id, line_no);
    lx.noun_forms = {required_string(rec, "nom", id, line_no),
                     required_string(rec, "acc", id, line_no),
                     required_string(rec, "dat", id, line_no)};
    try {
      lx.determiner_class =
          determiner_class_from_string(required_string(rec, "determiner_class", id, line_no));
      lx.animacy = animacy_from_string(required_string(rec, "animacy", id, line_no));
    } catch (const SchemaError& e) {
      throw SchemaError("lexicon line " + std::to_string(line_no) + ": lexeme '" + id +
                        "': " + e.what());
    }
    if (auto g = rec.find("gloss"); g != rec.end() && g->is_string()) lx.gloss = g->get<std::string>();
    lexicon.add(std::move(lx));
  }
  return lexicon;
}

Lexicon load_lexicon_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open lexicon file " + path.string());
  return load_lexicon(in);
}

std::string inflect(const Lexicon& lexicon, std::string_view lexeme_id, Case c,
                    std::optional<DeterminerClass> determiner) {
  const Lexeme& lx = lexicon.at(lexeme_id);
  const auto& det = lexicon.determiners().at(determiner.value_or(lx.determiner_class), c);
  return det + " " + lx.form(c);
}

}  // namespace argprobe
