#ifndef PCSP_RING_HPP
#define PCSP_RING_HPP

#include <initializer_list>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pcsp/numbers.hpp"

namespace pcsp {

using VarId = int;

// Names the formal variables a family of polynomials may mention. Registries
// are frozen behind a shared_ptr<const>; two polynomials interoperate when
// they share a registry (or one of them is a plain constant).
class VarRegistry {
public:
  VarId add(const std::string& name);
  VarId id_of(const std::string& name) const;  // -1 when absent
  const std::string& name_of(VarId v) const;
  int size() const { return static_cast<int>(names_.size()); }
  const std::vector<std::string>& names() const { return names_; }

private:
  std::vector<std::string> names_;
  std::map<std::string, VarId> index_;
};

using RegistryPtr = std::shared_ptr<const VarRegistry>;

RegistryPtr make_registry(std::initializer_list<std::string> names);
RegistryPtr make_registry(const std::vector<std::string>& names);

// Sparse exponent vector: (variable, exponent) pairs sorted by variable,
// exponents nonzero rationals. The empty vector is the constant term.
using Exponents = std::vector<std::pair<VarId, Rat>>;

// Multivariate generalized polynomial: integer coefficients, rational (and
// possibly negative) exponents. Terms are kept in a canonical order --
// lexicographic over the (variable, exponent) pair sequence -- so structural
// equality is plain vector equality and rendering is deterministic.
class Polynomial {
public:
  struct Term {
    Exponents exps;
    Int coeff;
    bool operator==(const Term& o) const { return exps == o.exps && coeff == o.coeff; }
  };

  Polynomial() = default;                 // zero
  explicit Polynomial(Int c, RegistryPtr reg = nullptr);

  static Polynomial constant(Int c, RegistryPtr reg = nullptr);
  static Polynomial variable(RegistryPtr reg, VarId v, Rat exp = Rat(1));
  static Polynomial monomial(RegistryPtr reg, Int coeff, Exponents exps);
  static Polynomial from_terms(RegistryPtr reg, std::vector<Term> terms);

  // Grammar: term ('+'|'-' term)*, term = factor ('*' factor)*, factor =
  // integer or name['^' rational]. Every name must be registered.
  static Polynomial parse(const std::string& text, RegistryPtr reg);

  const std::vector<Term>& terms() const { return terms_; }
  const RegistryPtr& registry() const { return reg_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_one() const;
  bool is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].exps.empty()); }
  bool has_negative_coefficient() const;
  std::size_t term_count() const { return terms_.size(); }

  // Exponent of `v` in one term; variables not mentioned have exponent 0.
  static Rat exponent_in(const Term& t, VarId v);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o) { return *this = *this + o; }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  // Sum of all coefficients = evaluation at all-ones.
  Int coefficient_sum() const;

  // Largest / smallest exponent of `v` across terms (0 for terms without v).
  // Error on the zero polynomial, which has no degree.
  Rat max_degree(VarId v) const;
  Rat min_degree(VarId v) const;

  // Largest |exponent| over every variable of every term; 0 for constants.
  Rat max_abs_exponent() const;

  // Sub-polynomial of the terms whose exponents match `constraints` exactly
  // (a constrained variable absent from a term counts as exponent 0). The
  // constrained variables are removed from the surviving terms.
  Polynomial coefficient_of(const std::map<VarId, Rat>& constraints) const;
  Polynomial coefficient_at(VarId v, const Rat& exp) const;

  // Numeric evaluation; every variable that occurs must be assigned. Bases
  // must be positive wherever a fractional (or, for zero, negative) exponent
  // touches them.
  double evaluate(const std::map<VarId, double>& values) const;

  // Drops every term that is dominated in `v`: among terms identical except
  // for their exponent of v, only the one with the largest exponent is kept.
  // Sound for counting maxima only when all coefficients are nonnegative, so
  // a negative coefficient is an error.
  Polynomial prune_z(VarId v) const;

  std::string to_string() const;

private:
  RegistryPtr reg_;
  std::vector<Term> terms_;
};

// Lexicographic order over exponent vectors; the canonical term order.
struct ExpLess {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

// The scalar domain a solver runs in. Everything generic over R uses only
// zero/one and the ring operators, so the same code path serves exact
// polynomial solves and fast numeric ones.
template <class R>
struct RingTraits;

template <>
struct RingTraits<Polynomial> {
  static Polynomial zero() { return Polynomial(); }
  static Polynomial one() { return Polynomial(Int(1)); }
  static bool is_zero(const Polynomial& p) { return p.is_zero(); }
};

template <>
struct RingTraits<double> {
  static double zero() { return 0.0; }
  static double one() { return 1.0; }
  static bool is_zero(double x) { return x == 0.0; }
};

}  // namespace pcsp

#endif
