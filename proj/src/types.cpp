#include "polarity/types.hpp"

#include <algorithm>
#include <cctype>

namespace polarity {

std::string_view to_string(Polarity p) {
  return p == Polarity::Positive ? "positive" : "negative";
}

Polarity parse_polarity(std::string_view s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (lower == "positive" || lower == "pos" || lower == "p") return Polarity::Positive;
  if (lower == "negative" || lower == "neg" || lower == "n") return Polarity::Negative;
  throw ConfigError("unknown polarity '" + std::string(s) + "'");
}

Domain Domain::other(std::string name) {
  Domain d;
  d.kind_ = Kind::Other;
  d.other_ = std::move(name);
  return d;
}

Domain Domain::parse(std::string_view name) {
  if (name.empty()) throw ConfigError("empty domain name");
  if (name == "beauty") return Domain(Kind::Beauty);
  if (name == "books") return Domain(Kind::Books);
  if (name == "kitchen") return Domain(Kind::Kitchen);
  if (name == "software") return Domain(Kind::Software);
  for (char c : name) {
    if (std::isspace(static_cast<unsigned char>(c)) || c == '"' || c == ']')
      throw ConfigError("domain name may not contain whitespace, quotes or ']': '" +
                        std::string(name) + "'");
  }
  return other(std::string(name));
}

std::string Domain::name() const {
  switch (kind_) {
    case Kind::Beauty: return "beauty";
    case Kind::Books: return "books";
    case Kind::Kitchen: return "kitchen";
    case Kind::Software: return "software";
    case Kind::Other: break;
  }
  return other_;
}

TokenSeq make_tokens(std::initializer_list<std::string_view> surfaces) {
  TokenSeq out;
  out.reserve(surfaces.size());
  for (auto s : surfaces) out.push_back(Token{std::string(s), false});
  return out;
}

}  // namespace polarity
