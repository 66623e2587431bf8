// types.hpp
//
// Core value types shared by every stage of the pipeline.

#ifndef POLARITY_TYPES_HPP
#define POLARITY_TYPES_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace polarity {

/// Binary sentiment orientation. There is no neutral class anywhere.
enum class Polarity { Positive, Negative };

std::string_view to_string(Polarity p);
Polarity parse_polarity(std::string_view s);

inline Polarity flip(Polarity p) {
  return p == Polarity::Positive ? Polarity::Negative : Polarity::Positive;
}

/// Bad user input: unknown enum names, out-of-range parameters.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Unreadable or unwritable files.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Product domain of a review. The four named domains come from the
/// multi-domain Amazon collection; anything else is carried by name.
class Domain {
 public:
  enum class Kind { Beauty, Books, Kitchen, Software, Other };

  Domain() = default;
  explicit Domain(Kind kind) : kind_(kind) {}
  static Domain other(std::string name);
  static Domain parse(std::string_view name);

  Kind kind() const { return kind_; }
  std::string name() const;

  friend bool operator==(const Domain& a, const Domain& b) {
    return a.kind_ == b.kind_ && a.other_ == b.other_;
  }
  friend bool operator<(const Domain& a, const Domain& b) {
    return a.name() < b.name();
  }

 private:
  Kind kind_ = Kind::Other;
  std::string other_ = "other";
};

/// A lowercased word. A negated token contributes the feature form
/// `NOT_<surface>`, distinct from the plain surface.
struct Token {
  std::string surface;
  bool negated = false;

  std::string feature_form() const {
    return negated ? "NOT_" + surface : surface;
  }
  friend bool operator==(const Token&, const Token&) = default;
};

using TokenSeq = std::vector<Token>;

TokenSeq make_tokens(std::initializer_list<std::string_view> surfaces);

struct Sentence {
  std::size_t index = 0;
  std::string text;
  TokenSeq tokens;
};

struct ReviewDocument {
  std::string id;
  Domain domain;
  Polarity label = Polarity::Positive;
  std::string raw_text;
  std::vector<Sentence> sentences;
};

}  // namespace polarity

#endif  // POLARITY_TYPES_HPP
