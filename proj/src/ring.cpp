#include "pcsp/ring.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "pcsp/errors.hpp"

namespace pcsp {

VarId VarRegistry::add(const std::string& name) {
  if (name.empty()) throw UsageError("variable name must be nonempty");
  if (index_.count(name)) throw UsageError("duplicate variable name '" + name + "'");
  VarId v = static_cast<VarId>(names_.size());
  names_.push_back(name);
  index_[name] = v;
  return v;
}

VarId VarRegistry::id_of(const std::string& name) const {
  auto it = index_.find(name);
  return it == index_.end() ? -1 : it->second;
}

const std::string& VarRegistry::name_of(VarId v) const {
  if (v < 0 || v >= size()) throw UsageError("variable id out of range");
  return names_[static_cast<std::size_t>(v)];
}

RegistryPtr make_registry(std::initializer_list<std::string> names) {
  return make_registry(std::vector<std::string>(names));
}

RegistryPtr make_registry(const std::vector<std::string>& names) {
  auto reg = std::make_shared<VarRegistry>();
  for (const auto& n : names) reg->add(n);
  return reg;
}

bool ExpLess::operator()(const Exponents& a, const Exponents& b) const {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].first != b[i].first) return a[i].first < b[i].first;
    if (a[i].second != b[i].second) return a[i].second < b[i].second;
  }
  return a.size() < b.size();
}

namespace {

const ExpLess kExpLess{};

bool term_less(const Polynomial::Term& a, const Polynomial::Term& b) {
  return kExpLess(a.exps, b.exps);
}

// Two polynomials may combine when their registries are the same object,
// have identical contents, or at least one side is a bare constant.
RegistryPtr unify_registries(const RegistryPtr& a, const RegistryPtr& b) {
  if (!a) return b;
  if (!b || a == b) return a;
  if (a->names() == b->names()) return a;
  throw UsageError("polynomials built over different variable registries");
}

void check_var(const RegistryPtr& reg, VarId v) {
  if (!reg) throw UsageError("polynomial has no variable registry");
  if (v < 0 || v >= reg->size()) throw UsageError("variable id out of range");
}

}  // namespace

Polynomial::Polynomial(Int c, RegistryPtr reg) : reg_(std::move(reg)) {
  if (c != 0) terms_.push_back(Term{{}, std::move(c)});
}

Polynomial Polynomial::constant(Int c, RegistryPtr reg) {
  return Polynomial(std::move(c), std::move(reg));
}

Polynomial Polynomial::variable(RegistryPtr reg, VarId v, Rat exp) {
  check_var(reg, v);
  Exponents e;
  if (exp != 0) e.emplace_back(v, std::move(exp));
  return monomial(std::move(reg), Int(1), std::move(e));
}

Polynomial Polynomial::monomial(RegistryPtr reg, Int coeff, Exponents exps) {
  std::vector<Term> ts;
  ts.push_back(Term{std::move(exps), std::move(coeff)});
  return from_terms(std::move(reg), std::move(ts));
}

Polynomial Polynomial::from_terms(RegistryPtr reg, std::vector<Term> terms) {
  for (auto& t : terms) {
    std::sort(t.exps.begin(), t.exps.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < t.exps.size(); ++i) {
      if (reg) check_var(reg, t.exps[i].first);
      if (i > 0 && t.exps[i].first == t.exps[i - 1].first)
        throw UsageError("repeated variable within one exponent vector");
    }
    t.exps.erase(std::remove_if(t.exps.begin(), t.exps.end(),
                                [](const auto& p) { return p.second == 0; }),
                 t.exps.end());
  }
  std::sort(terms.begin(), terms.end(), term_less);
  Polynomial p;
  p.reg_ = std::move(reg);
  for (auto& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().exps == t.exps)
      p.terms_.back().coeff += t.coeff;
    else
      p.terms_.push_back(std::move(t));
    if (p.terms_.back().coeff == 0) p.terms_.pop_back();
  }
  return p;
}

bool Polynomial::is_one() const {
  return terms_.size() == 1 && terms_[0].exps.empty() && terms_[0].coeff == 1;
}

bool Polynomial::has_negative_coefficient() const {
  for (const auto& t : terms_)
    if (t.coeff < 0) return true;
  return false;
}

Rat Polynomial::exponent_in(const Term& t, VarId v) {
  for (const auto& [var, exp] : t.exps) {
    if (var == v) return exp;
    if (var > v) break;
  }
  return Rat(0);
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial out;
  out.reg_ = unify_registries(reg_, o.reg_);
  out.terms_.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    bool take_left;
    if (i == terms_.size())
      take_left = false;
    else if (j == o.terms_.size())
      take_left = true;
    else if (terms_[i].exps == o.terms_[j].exps) {
      Int c = terms_[i].coeff + o.terms_[j].coeff;
      if (c != 0) out.terms_.push_back(Term{terms_[i].exps, std::move(c)});
      ++i, ++j;
      continue;
    } else {
      take_left = kExpLess(terms_[i].exps, o.terms_[j].exps);
    }
    out.terms_.push_back(take_left ? terms_[i++] : o.terms_[j++]);
  }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (auto& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

Polynomial Polynomial::operator-(const Polynomial& o) const { return *this + (-o); }

Polynomial Polynomial::operator*(const Polynomial& o) const {
  Polynomial out;
  out.reg_ = unify_registries(reg_, o.reg_);
  if (terms_.empty() || o.terms_.empty()) return out;
  std::map<Exponents, Int, ExpLess> acc;
  Exponents prod;
  for (const auto& a : terms_) {
    for (const auto& b : o.terms_) {
      prod.clear();
      std::size_t i = 0, j = 0;
      while (i < a.exps.size() || j < b.exps.size()) {
        if (j == b.exps.size() || (i < a.exps.size() && a.exps[i].first < b.exps[j].first)) {
          prod.push_back(a.exps[i++]);
        } else if (i == a.exps.size() || b.exps[j].first < a.exps[i].first) {
          prod.push_back(b.exps[j++]);
        } else {
          Rat e = a.exps[i].second + b.exps[j].second;
          if (e != 0) prod.emplace_back(a.exps[i].first, std::move(e));
          ++i, ++j;
        }
      }
      acc[prod] += a.coeff * b.coeff;
    }
  }
  for (auto& [exps, coeff] : acc)
    if (coeff != 0) out.terms_.push_back(Term{exps, std::move(coeff)});
  return out;
}

Int Polynomial::coefficient_sum() const {
  Int s = 0;
  for (const auto& t : terms_) s += t.coeff;
  return s;
}

Rat Polynomial::max_degree(VarId v) const {
  if (terms_.empty()) throw UsageError("degree of the zero polynomial is undefined");
  if (reg_) check_var(reg_, v);
  Rat best = exponent_in(terms_[0], v);
  for (std::size_t i = 1; i < terms_.size(); ++i)
    best = std::max(best, exponent_in(terms_[i], v));
  return best;
}

Rat Polynomial::min_degree(VarId v) const {
  if (terms_.empty()) throw UsageError("degree of the zero polynomial is undefined");
  if (reg_) check_var(reg_, v);
  Rat best = exponent_in(terms_[0], v);
  for (std::size_t i = 1; i < terms_.size(); ++i)
    best = std::min(best, exponent_in(terms_[i], v));
  return best;
}

Rat Polynomial::max_abs_exponent() const {
  Rat best(0);
  for (const auto& t : terms_)
    for (const auto& [var, exp] : t.exps) best = std::max(best, exp < 0 ? Rat(-exp) : exp);
  return best;
}

Polynomial Polynomial::coefficient_of(const std::map<VarId, Rat>& constraints) const {
  for (const auto& [v, exp] : constraints) {
    (void)exp;
    if (reg_) check_var(reg_, v);
  }
  std::vector<Term> kept;
  for (const auto& t : terms_) {
    bool match = true;
    for (const auto& [v, exp] : constraints)
      if (exponent_in(t, v) != exp) {
        match = false;
        break;
      }
    if (!match) continue;
    Term copy = t;
    copy.exps.erase(std::remove_if(copy.exps.begin(), copy.exps.end(),
                                   [&](const auto& p) { return constraints.count(p.first) != 0; }),
                    copy.exps.end());
    kept.push_back(std::move(copy));
  }
  return from_terms(reg_, std::move(kept));
}

Polynomial Polynomial::coefficient_at(VarId v, const Rat& exp) const {
  return coefficient_of({{v, exp}});
}

double Polynomial::evaluate(const std::map<VarId, double>& values) const {
  double sum = 0.0;
  for (const auto& t : terms_) {
    double prod = to_double(t.coeff);
    for (const auto& [var, exp] : t.exps) {
      auto it = values.find(var);
      if (it == values.end())
        throw UsageError("evaluate: variable '" +
                         (reg_ ? reg_->name_of(var) : std::to_string(var)) + "' unassigned");
      double x = it->second;
      if (x < 0 && !rat_is_integer(exp))
        throw UsageError("evaluate: negative base with fractional exponent");
      if (x == 0 && exp < 0)
        throw UsageError("evaluate: zero base with negative exponent");
      prod *= (x < 0) ? std::pow(x, static_cast<double>(rat_num(exp).convert_to<long long>()))
                      : std::pow(x, to_double(exp));
    }
    sum += prod;
  }
  return sum;
}

Polynomial Polynomial::prune_z(VarId v) const {
  if (reg_) check_var(reg_, v);
  if (has_negative_coefficient())
    throw UsageError("prune requires nonnegative coefficients");
  // Group terms by their exponents excluding v; each group keeps only the
  // term with the largest exponent of v (every other term of the group is a
  // positive multiple of it times a positive power of v).
  std::map<Exponents, Rat, ExpLess> best;
  Exponents rest;
  for (const auto& t : terms_) {
    rest.clear();
    Rat zexp(0);
    for (const auto& [var, exp] : t.exps) {
      if (var == v)
        zexp = exp;
      else
        rest.push_back({var, exp});
    }
    auto [it, fresh] = best.emplace(rest, zexp);
    if (!fresh && zexp > it->second) it->second = zexp;
  }
  std::vector<Term> kept;
  for (const auto& t : terms_) {
    rest.clear();
    Rat zexp(0);
    for (const auto& [var, exp] : t.exps) {
      if (var == v)
        zexp = exp;
      else
        rest.push_back({var, exp});
    }
    if (best.at(rest) == zexp) kept.push_back(t);
  }
  Polynomial out;
  out.reg_ = reg_;
  out.terms_ = std::move(kept);  // a subsequence of canonical order stays canonical
  return out;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& t : terms_) {
    Int c = t.coeff;
    if (first) {
      if (c < 0) {
        os << "-";
        c = -c;
      }
      first = false;
    } else {
      os << (c < 0 ? " - " : " + ");
      if (c < 0) c = -c;
    }
    bool need_star = false;
    if (c != 1 || t.exps.empty()) {
      os << c.str();
      need_star = true;
    }
    for (const auto& [var, exp] : t.exps) {
      if (need_star) os << "*";
      need_star = true;
      os << (reg_ ? reg_->name_of(var) : "x" + std::to_string(var));
      if (exp != 1) os << "^" << rational_to_string(exp);
    }
  }
  return os.str();
}

namespace {

// Minimal scanner for the polynomial grammar. Kept free of lookahead tricks:
// the token set is plus/minus/star/caret/slash, integers, and names.
struct PolyParser {
  const std::string& s;
  std::size_t pos = 0;
  RegistryPtr reg;

  void skip_ws() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& why) {
    throw UsageError("polynomial parse error at offset " + std::to_string(pos) + ": " + why +
                     " in '" + s + "'");
  }

  Int integer() {
    skip_ws();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    if (pos == start) fail("expected integer");
    return Int(s.substr(start, pos - start));
  }

  std::string name() {
    skip_ws();
    std::size_t start = pos;
    if (pos >= s.size() || !std::isalpha(static_cast<unsigned char>(s[pos])) )
      fail("expected variable name");
    while (pos < s.size() &&
           (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_'))
      ++pos;
    return s.substr(start, pos - start);
  }

  Rat exponent() {
    bool neg = eat('-');
    Int num = integer();
    Int den(1);
    if (eat('/')) den = integer();
    if (den == 0) fail("zero denominator");
    Rat q(num, den);
    return neg ? Rat(-q) : q;
  }

  Polynomial::Term term() {
    Polynomial::Term t;
    t.coeff = 1;
    std::map<VarId, Rat> exps;
    bool first_factor = true;
    do {
      skip_ws();
      if (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
        t.coeff *= integer();
      } else {
        std::string n = name();
        VarId v = reg ? reg->id_of(n) : -1;
        if (v < 0) fail("unknown variable '" + n + "'");
        Rat e(1);
        if (eat('^')) e = exponent();
        exps[v] += e;
      }
      first_factor = false;
    } while (eat('*'));
    (void)first_factor;
    for (auto& [v, e] : exps)
      if (e != 0) t.exps.emplace_back(v, std::move(e));
    return t;
  }

  Polynomial run() {
    std::vector<Polynomial::Term> terms;
    bool neg = eat('-');
    for (;;) {
      Polynomial::Term t = term();
      if (neg) t.coeff = -t.coeff;
      terms.push_back(std::move(t));
      skip_ws();
      if (pos >= s.size()) break;
      if (eat('+'))
        neg = false;
      else if (eat('-'))
        neg = true;
      else
        fail("expected '+' or '-'");
    }
    return Polynomial::from_terms(reg, std::move(terms));
  }
};

}  // namespace

Polynomial Polynomial::parse(const std::string& text, RegistryPtr reg) {
  PolyParser p{text, 0, std::move(reg)};
  p.skip_ws();
  if (p.pos >= text.size()) throw UsageError("empty polynomial text");
  return p.run();
}

}  // namespace pcsp
