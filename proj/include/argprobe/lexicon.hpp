#pragma once

#include <array>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace argprobe {

enum class Case { Nom = 0, Acc = 1, Dat = 2 };

inline constexpr std::array<Case, 3> kAllCases{Case::Nom, Case::Acc, Case::Dat};

/// Single-letter code used in case-order labels: N, A, D.
char case_code(Case c);
Case case_from_code(char code);
/// Lower-case name used in file schemas: nom, acc, dat.
std::string_view case_name(Case c);

enum class DeterminerClass { Definite, Indefinite };
enum class Animacy { Human, Inanimate };

std::string_view to_string(DeterminerClass d);
std::string_view to_string(Animacy a);
DeterminerClass determiner_class_from_string(std::string_view s);
Animacy animacy_from_string(std::string_view s);

/// A masculine singular noun with its case forms stored verbatim.
struct Lexeme {
  std::string id;
  std::array<std::string, 3> noun_forms;  // indexed by Case
  DeterminerClass determiner_class = DeterminerClass::Definite;
  Animacy animacy = Animacy::Human;
  std::optional<std::string> gloss;

  const std::string& form(Case c) const { return noun_forms[static_cast<int>(c)]; }
};

/// Determiner surface forms for each (class, case).
class DeterminerTable {
 public:
  /// der/den/dem and ein/einen/einem.
  DeterminerTable();

  const std::string& at(DeterminerClass d, Case c) const;
  void set(DeterminerClass d, Case c, std::string form);

 private:
  std::array<std::array<std::string, 3>, 2> forms_;
};

class Lexicon {
 public:
  Lexicon() = default;
  explicit Lexicon(DeterminerTable determiners) : determiners_(std::move(determiners)) {}

  /// Throws SchemaError on a duplicate id or an empty noun form.
  void add(Lexeme lexeme);

  const Lexeme& at(std::string_view id) const;
  const Lexeme* find(std::string_view id) const;
  bool contains(std::string_view id) const { return find(id) != nullptr; }
  std::size_t size() const { return lexemes_.size(); }
  bool empty() const { return lexemes_.empty(); }

  const DeterminerTable& determiners() const { return determiners_; }
  const std::map<std::string, Lexeme, std::less<>>& lexemes() const { return lexemes_; }

 private:
  std::map<std::string, Lexeme, std::less<>> lexemes_;
  DeterminerTable determiners_;
};

/// Reads one JSON object per line with fields
/// id, nom, acc, dat, determiner_class, animacy and optional gloss.
/// Blank lines and lines starting with '#' are ignored.
Lexicon load_lexicon(std::istream& in);
Lexicon load_lexicon_file(const std::filesystem::path& path);

/// determiner + " " + noun form. An explicit class overrides the lexeme's own.
std::string inflect(const Lexicon& lexicon, std::string_view lexeme_id, Case c,
                    std::optional<DeterminerClass> determiner = std::nullopt);

}  // namespace argprobe
