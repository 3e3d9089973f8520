#include "pcsp/numbers.hpp"

#include <cctype>
#include <cstddef>

#include "pcsp/errors.hpp"

namespace pcsp {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rat parse_rational(const std::string& text) {
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = (s[0] == '-');
    s.erase(0, 1);
  }
  std::size_t slash = s.find('/');
  std::string num = (slash == std::string::npos) ? s : s.substr(0, slash);
  std::string den = (slash == std::string::npos) ? "1" : s.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw UsageError("malformed rational: '" + text + "'");
  Int d(den);
  if (d == 0) throw UsageError("zero denominator in rational: '" + text + "'");
  Rat q(Int(num), d);
  return neg ? Rat(-q) : q;
}

Rat parse_decimal_or_rational(const std::string& text) {
  std::size_t dot = text.find('.');
  if (dot == std::string::npos) return parse_rational(text);
  std::string s = text;
  bool neg = false;
  if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
    neg = (s[0] == '-');
    s.erase(0, 1);
    --dot;
  }
  std::string whole = s.substr(0, dot);
  std::string frac = s.substr(dot + 1);
  if (whole.empty()) whole = "0";
  if (!all_digits(whole) || !all_digits(frac))
    throw UsageError("malformed number: '" + text + "'");
  Int scale = 1;
  for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
  Rat q(Int(whole) * scale + Int(frac.empty() ? "0" : frac), scale);
  return neg ? Rat(-q) : q;
}

std::string rational_to_string(const Rat& q) {
  std::string out = rat_num(q).str();
  if (!rat_is_integer(q)) out += "/" + rat_den(q).str();
  return out;
}

double to_double(const Rat& q) { return q.convert_to<double>(); }
double to_double(const Int& n) { return n.convert_to<double>(); }

}  // namespace pcsp
