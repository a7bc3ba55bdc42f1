#include <cctype>
#include <sstream>
#include <stdexcept>

#include "adsub/policy.hpp"

namespace adsub {

namespace {

class SpecParser {
 public:
  explicit SpecParser(const std::string& text) : text_(text) {}

  PolicySpec parse_all() {
    PolicySpec spec = parse_spec();
    skip_space();
    if (pos_ != text_.size()) fail("trailing characters");
    return spec;
  }

 private:
  PolicySpec parse_spec() {
    PolicySpec spec;
    spec.name = parse_token();
    if (spec.name.empty()) fail("expected a policy name");
    skip_space();
    if (!consume('(')) return spec;
    skip_space();
    if (consume(')')) return spec;
    while (true) {
      skip_space();
      const std::size_t start = pos_;
      std::string token = parse_token();
      skip_space();
      if (consume('=')) {
        skip_space();
        std::string value = parse_token();
        if (value.empty()) fail("empty value for '" + token + "'");
        if (!spec.params.emplace(token, value).second) fail("duplicate parameter '" + token + "'");
      } else {
        pos_ = start;
        spec.children.push_back(parse_spec());
      }
      skip_space();
      if (consume(')')) break;
      if (!consume(',')) fail("expected ',' or ')'");
    }
    return spec;
  }

  std::string parse_token() {
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(' || c == ')' || c == ',' || c == '=' || std::isspace(static_cast<unsigned char>(c))) break;
      ++pos_;
    }
    return text_.substr(start, pos_ - start);
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool consume(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw std::invalid_argument("policy descriptor '" + text_ + "': " + what + " at offset " + std::to_string(pos_));
  }

  const std::string& text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string PolicySpec::to_string() const {
  if (params.empty() && children.empty()) return name;
  std::ostringstream os;
  os << name << '(';
  bool first = true;
  for (const auto& [key, value] : params) {
    if (!first) os << ',';
    os << key << '=' << value;
    first = false;
  }
  for (const auto& child : children) {
    if (!first) os << ',';
    os << child.to_string();
    first = false;
  }
  os << ')';
  return os.str();
}

PolicySpec PolicySpec::parse(const std::string& text) { return SpecParser(text).parse_all(); }

}  // namespace adsub
