#pragma once

// Small recursive-descent reader for complex parameter literals.  Accepts
// cartesian forms ("1.4+0.25i", "-1.003", "pi/2-1.003") and polar forms
// ("1.2e^{(83/90)pi i}", "1.505e^{(89/90)pi i}"): numbers, the constants
// pi / e / i, + - * / ^ (pow, right-associative), parentheses () {}, and
// implicit multiplication by juxtaposition.  Note "1.2e^" does not start a
// float exponent: the longest valid float prefix is "1.2", then `e` is the
// constant.  Also parses itineraries ("0+", "1-,0+") and key=value files.

#include <cctype>
#include <cmath>
#include <complex>
#include <cstdlib>
#include <fstream>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "sindyn/complexfn.hpp"
#include "sindyn/constants.hpp"
#include "sindyn/hair.hpp"

namespace sindyn {

struct ParseError : std::invalid_argument {
  explicit ParseError(const std::string& what) : std::invalid_argument(what) {}
};

namespace detail {

class ExprReader {
 public:
  explicit ExprReader(const std::string& s) : s_(s) {}

  [[nodiscard]] Cplx parse() {
    const Cplx v = expr();
    skip_ws();
    if (pos_ != s_.size()) fail("trailing characters");
    return v;
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("cannot parse '" + s_ + "' at offset " + std::to_string(pos_) + ": " +
                     msg);
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[nodiscard]] char peek() {
    skip_ws();
    return pos_ < s_.size() ? s_[pos_] : '\0';
  }

  [[nodiscard]] bool starts_atom() {
    const char c = peek();
    return std::isdigit(static_cast<unsigned char>(c)) || c == '.' || c == '(' || c == '{' ||
           std::isalpha(static_cast<unsigned char>(c));
  }

  Cplx expr() {
    Cplx v = term();
    while (true) {
      const char c = peek();
      if (c == '+') {
        ++pos_;
        v += term();
      } else if (c == '-') {
        ++pos_;
        v -= term();
      } else {
        return v;
      }
    }
  }

  Cplx term() {
    Cplx v = unary();
    while (true) {
      const char c = peek();
      if (c == '*') {
        ++pos_;
        v *= unary();
      } else if (c == '/') {
        ++pos_;
        const Cplx d = unary();
        if (d == Cplx(0.0, 0.0)) fail("division by zero");
        v /= d;
      } else if (starts_atom()) {
        v *= power();  // juxtaposition: no leading sign on the right factor
      } else {
        return v;
      }
    }
  }

  Cplx unary() {
    double sign = 1.0;
    while (true) {
      const char c = peek();
      if (c == '-') {
        sign = -sign;
        ++pos_;
      } else if (c == '+') {
        ++pos_;
      } else {
        break;
      }
    }
    return sign * power();
  }

  Cplx power() {
    const Cplx base = atom();
    if (peek() == '^') {
      ++pos_;
      const Cplx e = unary();  // right-associative, sign allowed
      return std::pow(base, e);
    }
    return base;
  }

  Cplx atom() {
    const char c = peek();
    if (c == '(' || c == '{') {
      const char close = c == '(' ? ')' : '}';
      ++pos_;
      const Cplx v = expr();
      if (peek() != close) fail(std::string("expected '") + close + "'");
      ++pos_;
      return v;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* begin = s_.c_str() + pos_;
      char* end = nullptr;
      const double v = std::strtod(begin, &end);
      if (end == begin) fail("malformed number");
      pos_ += static_cast<std::size_t>(end - begin);
      return Cplx(v, 0.0);
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t n = pos_;
      while (n < s_.size() && std::isalpha(static_cast<unsigned char>(s_[n]))) ++n;
      const std::string word = s_.substr(pos_, n - pos_);
      if (word == "pi" || word == "Pi" || word == "PI") {
        pos_ = n;
        return Cplx(kPi, 0.0);
      }
      if (word == "i" || word == "I") {
        pos_ = n;
        return Cplx(0.0, 1.0);
      }
      if (word == "e" || word == "E") {
        pos_ = n;
        return Cplx(2.718281828459045235360287471352662498, 0.0);
      }
      // identifiers like "ei" never occur; split one letter and retry so
      // "pii" or "e i" variants do not silently misparse
      fail("unknown identifier '" + word + "'");
    }
    fail("expected a number, constant, or group");
  }
};

}  // namespace detail

[[nodiscard]] inline Cplx parse_complex(const std::string& text) {
  detail::ExprReader r(text);
  const Cplx v = r.parse();
  if (!finite(v)) throw ParseError("expression '" + text + "' is not finite");
  return v;
}

[[nodiscard]] inline double parse_real(const std::string& text) {
  const Cplx v = parse_complex(text);
  if (std::fabs(v.imag()) > kRealAxisTol) {
    throw ParseError("expected a real value, got '" + text + "'");
  }
  return v.real();
}

// itinerary literals: symbols "k+" (upper) / "k-" (lower), separated by
// commas or whitespace, e.g. "0+", "1-,0+"
[[nodiscard]] inline Itinerary parse_itinerary(const std::string& text) {
  Itinerary itin;
  std::size_t pos = 0;
  const auto skip = [&] {
    while (pos < text.size() &&
           (std::isspace(static_cast<unsigned char>(text[pos])) || text[pos] == ',')) {
      ++pos;
    }
  };
  skip();
  while (pos < text.size()) {
    const char* begin = text.c_str() + pos;
    char* end = nullptr;
    const long k = std::strtol(begin, &end, 10);
    if (end == begin) throw ParseError("itinerary '" + text + "': expected an integer");
    pos += static_cast<std::size_t>(end - begin);
    if (pos >= text.size() || (text[pos] != '+' && text[pos] != '-')) {
      throw ParseError("itinerary '" + text + "': expected '+' or '-' after the index");
    }
    itin.push_back({static_cast<int>(k),
                    text[pos] == '+' ? HalfPlane::Upper : HalfPlane::Lower});
    ++pos;
    skip();
  }
  if (itin.empty()) throw ParseError("itinerary '" + text + "' is empty");
  return itin;
}

// single-level key=value config file: '#' comments, blank lines ignored,
// whitespace around keys and values trimmed
[[nodiscard]] inline std::map<std::string, std::string> parse_config_file(
    const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  int lineno = 0;
  const auto trim = [](std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(t.substr(0, eq));
    const std::string val = trim(t.substr(eq + 1));
    if (key.empty()) {
      throw ParseError(path + ":" + std::to_string(lineno) + ": empty key");
    }
    kv[key] = val;
  }
  return kv;
}

}  // namespace sindyn
