#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "weilrad/algebra.hpp"
#include "weilrad/error.hpp"
#include "weilrad/extension.hpp"
#include "weilrad/ideal.hpp"
#include "weilrad/matrix.hpp"
#include "weilrad/unipotent.hpp"

namespace weilrad {

enum class FibreKind { Torus, SL2PowerTimesTorus, GL, PGL2 };

/// One reductive fibre G'_i over its factor field k_i, together with the
/// injectivity hypothesis on the centre that unusual fibres need.
struct FibreSpec {
  FibreKind kind = FibreKind::GL;
  std::size_t gl_size = 2;     // GL(n)
  std::size_t sl2_power = 1;   // r in SL2^r x T^s
  std::size_t torus_rank = 0;  // s in SL2^r x T^s, or the rank of a torus fibre
  ExtensionSpec ext{2, {1}};
  bool phi_injective_on_center = true;

  static FibreSpec torus(std::size_t rank, ExtensionSpec ext) {
    if (rank < 1) throw UsageError("torus fibre needs rank >= 1");
    return {FibreKind::Torus, 0, 0, rank, std::move(ext), true};
  }
  static FibreSpec sl2(ExtensionSpec ext, std::size_t r = 1, std::size_t s = 0) {
    if (r < 1) throw UsageError("SL2^r x T^s needs r >= 1");
    return {FibreKind::SL2PowerTimesTorus, 0, r, s, std::move(ext), true};
  }
  static FibreSpec gl(std::size_t n, ExtensionSpec ext) {
    if (n < 2) throw UsageError("GL(n) fibre needs n >= 2");
    return {FibreKind::GL, n, 0, 0, std::move(ext), true};
  }
  static FibreSpec pgl2(ExtensionSpec ext) { return {FibreKind::PGL2, 0, 0, 0, std::move(ext), true}; }

  /// "T<r>", "SL2", "SL2^<r>*T<s>", "GL<n>" or "PGL2".
  std::string kind_name() const {
    switch (kind) {
      case FibreKind::Torus: return "T" + std::to_string(torus_rank);
      case FibreKind::SL2PowerTimesTorus: {
        if (sl2_power == 1 && torus_rank == 0) return "SL2";
        std::string out = "SL2";
        if (sl2_power > 1) out += "^" + std::to_string(sl2_power);
        if (torus_rank > 0) out += "*T" + std::to_string(torus_rank);
        return out;
      }
      case FibreKind::GL: return "GL" + std::to_string(gl_size);
      case FibreKind::PGL2: return "PGL2";
    }
    return "?";
  }

  std::string to_string() const { return kind_name() + "@" + ext.to_string(); }

  bool is_commutative() const { return kind == FibreKind::Torus; }

  /// Parses "<KIND>@p=<p>;e=<e1,...>".
  static FibreSpec parse(std::string_view text) {
    std::string_view s = detail::trim(text);
    auto at = s.find('@');
    if (at == std::string_view::npos) {
      throw UsageError("fibre must look like '<KIND>@p=<p>;e=<e1,...>', got '" + std::string(text) + "'");
    }
    std::string_view kind = detail::trim(s.substr(0, at));
    ExtensionSpec ext = ExtensionSpec::parse(s.substr(at + 1));
    if (kind == "PGL2") return pgl2(std::move(ext));
    if (kind.substr(0, 3) == "SL2") {
      std::string_view rest = kind.substr(3);
      std::size_t r = 1, t = 0;
      if (!rest.empty() && rest.front() == '^') {
        auto star = rest.find('*');
        r = detail::parse_uint(rest.substr(1, star == std::string_view::npos ? std::string_view::npos : star - 1),
                               "SL2 power");
        rest = star == std::string_view::npos ? std::string_view{} : rest.substr(star);
      }
      if (!rest.empty()) {
        if (rest.substr(0, 2) != "*T") throw UsageError("unknown fibre kind '" + std::string(kind) + "'");
        t = detail::parse_uint(rest.substr(2), "torus rank");
      }
      return sl2(std::move(ext), r, t);
    }
    if (kind.substr(0, 2) == "GL") return gl(detail::parse_uint(kind.substr(2), "GL size"), std::move(ext));
    if (kind.substr(0, 1) == "T") return torus(detail::parse_uint(kind.substr(1), "torus rank"), std::move(ext));
    throw UsageError("unknown fibre kind '" + std::string(kind) + "' (expected SL2, SL2^r*T<s>, GL<n>, PGL2, T<r>)");
  }

  friend bool operator==(const FibreSpec&, const FibreSpec&) = default;
};

/// p = 2 and the fibre is SL2^r x torus.
inline bool is_unusual(const FibreSpec& f) {
  return f.ext.p() == 2 && f.kind == FibreKind::SL2PowerTimesTorus;
}

inline void require_hypothesis(const FibreSpec& f) {
  if (is_unusual(f) && !f.phi_injective_on_center) {
    throw HypothesisError("theorem hypothesis: unusual fibre " + f.to_string() +
                          " needs phi injective on the centre of its torus");
  }
}

/// ell_i: 1 for commutative fibres, the SL2 squares invariant for unusual
/// fibres, n - 1 otherwise.
inline std::uint64_t fibre_ell(const FibreSpec& f) {
  require_hypothesis(f);
  if (f.is_commutative()) return 1;
  if (is_unusual(f)) return unusual_class_invariant(f.ext);
  return nilpotency_index(f.ext) - 1;
}

/// Upper bound on the class from the ideal filtrations. Commutative fibres report 1.
inline std::uint64_t class_upper_bound(const FibreSpec& f) {
  if (f.is_commutative()) return 1;
  if (is_unusual(f)) return unusual_class_invariant(f.ext);
  return nilpotency_index(f.ext) - 1;
}

inline const char* upper_bound_source(const FibreSpec& f) {
  if (f.is_commutative()) return "commutative";
  if (is_unusual(f)) return "squares-filtration";
  return "m-adic-filtration";
}

// ---------------------------------------------------------------------------
// Witnesses

/// Generator indices whose product is the top monomial prod x_i^{q_i-1}:
/// x_1 repeated q_1 - 1 times, then x_2, and so on.
inline std::vector<std::size_t> top_monomial_factors(const ExtensionSpec& spec) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    for (std::uint64_t k = 0; k + 1 < spec.q(i); ++k) out.push_back(i);
  }
  return out;
}

inline AlgebraElement top_monomial(const TruncatedAlgebra& A) {
  std::vector<std::uint32_t> e(A.rank());
  for (std::size_t i = 0; i < A.rank(); ++i) e[i] = static_cast<std::uint32_t>(A.spec().q(i) - 1);
  return A.monomial(e);
}

/// A nested commutator certifying a lower bound on the nilpotency class.
/// `predicted` is the closed-form value of the final commutator; `computed`
/// is the same commutator recomputed through the group operations.
struct Witness {
  std::string construction;
  GroupTag group;
  std::vector<std::string> names;
  std::vector<AlgebraMatrix> generators;
  std::optional<AlgebraMatrix> intermediate;  // w, for the squares construction
  AlgebraMatrix predicted;
  AlgebraMatrix computed;
  std::uint64_t certified_length = 0;  // final element lies in the certified_length-th central term

  bool agrees() const { return predicted == computed; }
  bool nontrivial() const { return !computed.is_identity(); }
  /// Class >= certified_length, provided both checks pass.
  bool valid() const { return agrees() && nontrivial(); }
};

namespace detail {

inline AlgebraMatrix unitriangular(const AlgebraElement& b) {
  const auto& A = b.algebra();
  return AlgebraMatrix::of(A.one(), b, A.zero(), A.one());
}

inline AlgebraMatrix embed_top_left(const AlgebraMatrix& m, std::size_t n) {
  AlgebraMatrix out = AlgebraMatrix::identity(m.algebra(), n);
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) out = out.with(i, j, m.at(i, j));
  }
  return out;
}

inline std::vector<UnipotentElement> as_elements(GroupTag tag, const std::vector<AlgebraMatrix>& ms) {
  std::vector<UnipotentElement> out;
  for (const auto& m : ms) out.push_back(UnipotentElement::make(tag, m));
  return out;
}

}  // namespace detail

/// z = (1, m; 0, 1), y_i = (1 + m_i, 0; 0, 1) with m, m_1..m_{n-2} the
/// top-monomial factors (m first). Then [y_1,[...,[y_{n-2}, z]]] equals
/// (1, m m_1 ... m_{n-2}; 0, 1), which is non-trivial, so class >= n - 1.
inline Witness gl2_witness(const TruncatedAlgebra& A) {
  const std::uint64_t n = A.nilpotency_index();
  if (n < 2) throw NoWitness("trivial radical: m = 0");
  auto factors = top_monomial_factors(A.spec());
  Witness w{"gl2-nested-commutator", GroupTag::gl(2), {}, {}, std::nullopt,
            AlgebraMatrix::identity(A, 2), AlgebraMatrix::identity(A, 2), n - 1};
  const AlgebraElement m = A.generator(factors[0]);
  AlgebraElement product = m;
  for (std::size_t i = 1; i < factors.size(); ++i) {
    const AlgebraElement mi = A.generator(factors[i]);
    product = product * mi;
    w.names.push_back("y" + std::to_string(i));
    w.generators.push_back(AlgebraMatrix::diagonal({A.one() + mi, A.one()}));
  }
  w.names.push_back("z");
  w.generators.push_back(detail::unitriangular(m));
  w.predicted = detail::unitriangular(product);

  auto elems = detail::as_elements(w.group, w.generators);
  UnipotentElement z = elems.back();
  elems.pop_back();
  w.computed = nested_commutator(elems, z).matrix();
  return w;
}

/// The same chain viewed in GL(n) through the top-left 2x2 block.
inline Witness gln_embedded_witness(const TruncatedAlgebra& A, std::size_t size) {
  if (size < 2) throw UsageError("GL(n) witness needs n >= 2");
  Witness base = gl2_witness(A);
  if (size == 2) return base;
  Witness w = base;
  w.construction = "gl2-nested-commutator-embedded";
  w.group = GroupTag::gl(size);
  for (auto& g : w.generators) g = detail::embed_top_left(g, size);
  w.predicted = detail::embed_top_left(base.predicted, size);
  auto elems = detail::as_elements(w.group, w.generators);
  UnipotentElement z = elems.back();
  elems.pop_back();
  w.computed = nested_commutator(elems, z).matrix();
  return w;
}

/// Image of the GL2 chain in PGL2. The final commutator is non-scalar, so it
/// survives the quotient.
inline Witness pgl2_witness(const TruncatedAlgebra& A) {
  Witness base = gl2_witness(A);
  Witness w = base;
  w.construction = "gl2-nested-commutator-projected";
  w.group = GroupTag::pgl2();
  auto elems = detail::as_elements(w.group, w.generators);
  for (std::size_t i = 0; i < elems.size(); ++i) w.generators[i] = elems[i].matrix();
  w.predicted = UnipotentElement::canonical_pgl2(base.predicted);
  UnipotentElement z = elems.back();
  elems.pop_back();
  w.computed = nested_commutator(elems, z).matrix();
  return w;
}

/// SL2 with p odd: y_i = diag(1 + m_i, (1 + m_i)^{-1}). Each bracket with
/// y_i multiplies the corner by (1 + m_i)^2 - 1 = m_i (2 + m_i), a unit
/// multiple of m_i.
inline Witness sl2_odd_witness(const TruncatedAlgebra& A) {
  if (A.spec().p() == 2) throw UnsupportedCharacteristic("use the squares construction for SL2 in characteristic 2");
  const std::uint64_t n = A.nilpotency_index();
  auto factors = top_monomial_factors(A.spec());
  Witness w{"sl2-nested-commutator", GroupTag::sl2(), {}, {}, std::nullopt,
            AlgebraMatrix::identity(A, 2), AlgebraMatrix::identity(A, 2), n - 1};
  const AlgebraElement m = A.generator(factors[0]);
  AlgebraElement corner = m;
  for (std::size_t i = 1; i < factors.size(); ++i) {
    const AlgebraElement u = A.one() + A.generator(factors[i]);
    corner = corner * (u * u - A.one());
    w.names.push_back("y" + std::to_string(i));
    w.generators.push_back(AlgebraMatrix::diagonal({u, u.inverse()}));
  }
  w.names.push_back("z");
  w.generators.push_back(detail::unitriangular(m));
  w.predicted = detail::unitriangular(corner);
  auto elems = detail::as_elements(w.group, w.generators);
  UnipotentElement z = elems.back();
  elems.pop_back();
  w.computed = nested_commutator(elems, z).matrix();
  return w;
}

/// Exponent data realising the SL2 squares invariant: the monomial
/// x^{2 gamma} x_j x_k is non-zero and |gamma| is as large as possible.
struct SquaresSelection {
  std::vector<std::uint32_t> gamma;
  std::size_t j = 0, k = 0;
  std::uint64_t ell = 1;  // 2 + |gamma|
};

/// Maximises |gamma| subject to 2 gamma_i + delta_i <= q_i - 1 with delta
/// the sum of two unit vectors. nullopt when m^2 = 0.
inline std::optional<SquaresSelection> best_squares_selection(const ExtensionSpec& spec) {
  require_char2(spec, "the squares selection");
  std::optional<SquaresSelection> best;
  for (std::size_t j = 0; j < spec.rank(); ++j) {
    for (std::size_t k = j; k < spec.rank(); ++k) {
      SquaresSelection s;
      s.j = j;
      s.k = k;
      bool feasible = true;
      std::uint64_t total = 0;
      for (std::size_t i = 0; i < spec.rank(); ++i) {
        std::uint64_t delta = (i == j) + (i == k);
        if (spec.q(i) - 1 < delta) {
          feasible = false;
          break;
        }
        s.gamma.push_back(static_cast<std::uint32_t>((spec.q(i) - 1 - delta) / 2));
        total += s.gamma.back();
      }
      if (!feasible) continue;
      s.ell = 2 + total;
      if (!best || s.ell > best->ell) best = s;
    }
  }
  return best;
}

/// SL2 in characteristic 2 with ell >= 2. Takes m_1..m_{ell-2} from gamma,
/// m = x_j, and m' = tau / (m_1^2 ... m_{ell-2}^2 m) where tau is the top
/// monomial, so pi = m_1^2 ... m_{ell-2}^2 m m' = tau. With this choice
/// [z', w] = (1 + tau) I exactly: the off-diagonal terms b^2 m' and b m'^2
/// are multiples of tau by elements of m.
inline Witness sl2_char2_witness(const TruncatedAlgebra& A) {
  const auto& spec = A.spec();
  require_char2(spec, "the SL2 squares witness");
  auto sel = best_squares_selection(spec);
  if (!sel || sel->ell < 2) throw NoWitness("SL2 radical is abelian for " + spec.to_string() + " (class 1)");

  Witness w{"sl2-squares-commutator", GroupTag::sl2(), {}, {}, std::nullopt,
            AlgebraMatrix::identity(A, 2), AlgebraMatrix::identity(A, 2), sel->ell};
  std::vector<std::uint32_t> used(spec.rank(), 0);
  AlgebraElement b = A.one();
  std::size_t idx = 0;
  for (std::size_t i = 0; i < spec.rank(); ++i) {
    for (std::uint32_t c = 0; c < sel->gamma[i]; ++c) {
      const AlgebraElement mi = A.generator(i);
      const AlgebraElement u = A.one() + mi;
      b = b * mi * mi;
      used[i] += 2;
      w.names.push_back("y" + std::to_string(++idx));
      w.generators.push_back(AlgebraMatrix::diagonal({u, u.inverse()}));
    }
  }
  const AlgebraElement m = A.generator(sel->j);
  b = b * m;
  used[sel->j] += 1;
  std::vector<std::uint32_t> rest(spec.rank());
  for (std::size_t i = 0; i < spec.rank(); ++i) rest[i] = static_cast<std::uint32_t>(spec.q(i) - 1) - used[i];
  const AlgebraElement m_prime = A.monomial(rest);
  if (!m_prime.in_maximal_ideal() || m_prime.is_zero()) {
    throw InvariantViolation("squares selection left no room for m' in " + spec.to_string());
  }

  w.names.push_back("z");
  w.generators.push_back(detail::unitriangular(m));
  w.names.push_back("z'");
  w.generators.push_back(AlgebraMatrix::of(A.one(), A.zero(), m_prime, A.one()));
  w.intermediate = detail::unitriangular(b);
  const AlgebraElement pi = b * m_prime;
  w.predicted = AlgebraMatrix::diagonal({A.one() + pi, A.one() + pi});

  auto elems = detail::as_elements(w.group, w.generators);
  UnipotentElement z_prime = elems.back();
  elems.pop_back();
  UnipotentElement z = elems.back();
  elems.pop_back();
  UnipotentElement inner = nested_commutator(elems, z);
  if (!(inner.matrix() == *w.intermediate)) {
    throw InvariantViolation("nested commutator w disagrees with its closed form: " + inner.matrix().to_string());
  }
  w.computed = commutator(z_prime, inner).matrix();
  return w;
}

/// Certificate for class >= 1: any non-identity point.
inline Witness trivial_witness(const TruncatedAlgebra& A, GroupTag tag) {
  AlgebraMatrix g = AlgebraMatrix::identity(A, tag.matrix_size());
  if (tag.kind == GroupKind::Torus) {
    g = g.with(0, 0, A.one() + A.generator(0));
  } else {
    g = g.with(0, 1, A.generator(0));
  }
  Witness w{"nontrivial-element", tag, {"g"}, {g}, std::nullopt, g, UnipotentElement::make(tag, g).matrix(), 1};
  return w;
}

/// Class witness appropriate to the fibre kind, realised in its first
/// non-toral factor.
inline Witness fibre_witness(const FibreSpec& f, const TruncatedAlgebra& A) {
  switch (f.kind) {
    case FibreKind::Torus: return trivial_witness(A, GroupTag::torus(f.torus_rank));
    case FibreKind::GL: return gln_embedded_witness(A, f.gl_size);
    case FibreKind::PGL2: return pgl2_witness(A);
    case FibreKind::SL2PowerTimesTorus:
      if (f.ext.p() != 2) return sl2_odd_witness(A);
      if (unusual_class_invariant(f.ext) < 2) return trivial_witness(A, GroupTag::sl2());
      return sl2_char2_witness(A);
  }
  throw UsageError("unknown fibre kind");
}

/// Strictly upper superdiagonal n x n matrix with entries the first n - 1
/// top-monomial factors. Its (n-1)-th power has (1, n) entry equal to their
/// product, which is non-zero.
inline AlgebraMatrix gln_superdiagonal_witness(const TruncatedAlgebra& A, std::size_t n) {
  if (n < 2 || n > A.nilpotency_index()) {
    throw UsageError("superdiagonal witness needs 2 <= n <= " + std::to_string(A.nilpotency_index()));
  }
  auto factors = top_monomial_factors(A.spec());
  AlgebraMatrix x = AlgebraMatrix::zero(A, n);
  for (std::size_t i = 0; i + 1 < n; ++i) x = x.with(i, i + 1, A.generator(factors[i]));
  return x;
}

/// (1 + x_i, x_j; 0, 1) with e_i maximal and j != i. Its p^e-th power is
/// (1, x_j x_i^{p^e - 1}; 0, 1), non-trivial, so its order is p^{e+1}.
inline AlgebraMatrix imprimitive_borel_witness(const TruncatedAlgebra& A) {
  const auto& spec = A.spec();
  if (spec.is_primitive()) throw NoWitness("primitive extension " + spec.to_string() + " has Borel exponent e");
  const auto& e = spec.exponents();
  std::size_t i = static_cast<std::size_t>(std::max_element(e.begin(), e.end()) - e.begin());
  std::size_t j = i == 0 ? 1 : 0;
  return AlgebraMatrix::of(A.one() + A.generator(i), A.generator(j), A.zero(), A.one());
}

// ---------------------------------------------------------------------------
// Exponent bounds

/// Least s with p^s >= n.
inline std::uint32_t lemma41_exponent_bound(const ExtensionSpec& spec) {
  const std::uint64_t n = nilpotency_index(spec);
  std::uint32_t s = 0;
  for (std::uint64_t v = 1; v < n; v *= spec.p()) ++s;
  return s;
}
inline std::uint32_t lemma41_exponent_bound(const TruncatedAlgebra& A) { return lemma41_exponent_bound(A.spec()); }

/// Least s with p^s >= r^2 (p^e - 1), e the exponent of the extension.
inline std::uint32_t lemma44_exponent_bound(const ExtensionSpec& spec, std::uint64_t r) {
  if (r < 1) throw UsageError("matrix size must be >= 1");
  const std::uint64_t pe = detail::checked_power(spec.p(), spec.extension_exponent());
  if (pe == 0) throw UsageError("extension exponent too large");
  const unsigned __int128 target = static_cast<unsigned __int128>(r) * r * (pe - 1);
  std::uint32_t s = 0;
  for (unsigned __int128 v = 1; v < target; v *= spec.p()) ++s;
  return s;
}

/// Data for the open question on Borel exponents, for GL2 and SL2 (h = 2).
/// r_q = log_p [k' : k k'^p] - 1 = r - 1 for the modular presentation.
/// Every Levi subgroup of rank <= r_q has Coxeter number at most 2, so the
/// Levi term is 0 and the predicted exponent is e.
struct CoxeterQuestionData {
  std::string group;
  ExtensionSpec spec;
  std::uint32_t e = 0;
  std::uint32_t r_q = 0;
  std::uint32_t coxeter_number = 2;
  std::uint32_t levi_s = 0;
  std::uint32_t coxeter_term = 0;  // ceil(log_p(h - 1))
  std::uint32_t predicted = 0;
  static constexpr const char* status = "CONJECTURAL";
};

inline std::uint32_t ceil_log(std::uint64_t p, std::uint64_t x) {
  std::uint32_t s = 0;
  for (std::uint64_t v = 1; v < x; v *= p) ++s;
  return s;
}

inline CoxeterQuestionData coxeter_question_data(const GroupTag& tag, const ExtensionSpec& spec) {
  if (!(tag.kind == GroupKind::SL2 || (tag.kind == GroupKind::GL && tag.rank == 2))) {
    throw UsageError("the Borel exponent question is modelled for GL2 and SL2 only, got " + tag.to_string());
  }
  CoxeterQuestionData d{tag.to_string(), spec};
  d.e = spec.extension_exponent();
  d.r_q = static_cast<std::uint32_t>(spec.rank() - 1);
  d.coxeter_number = 2;
  // Levis of rank 0 are tori (no roots, empty maximum); the rank-1 Levi is the group itself.
  d.levi_s = d.r_q >= 1 ? ceil_log(spec.p(), d.coxeter_number - 1) : 0;
  d.coxeter_term = ceil_log(spec.p(), d.coxeter_number - 1);
  d.predicted = std::max(d.e + d.levi_s, d.coxeter_term);
  return d;
}

// ---------------------------------------------------------------------------
// Reports

struct FibreReport {
  FibreSpec fibre;
  bool commutative = false;
  bool unusual = false;
  std::uint64_t ell = 0;
  std::uint64_t upper_bound = 0;
  std::string upper_source;
  std::uint64_t witness_lower = 0;
  std::optional<Witness> witness;
  std::uint32_t lemma41 = 0;
  std::optional<std::uint32_t> lemma44;  // fibres sitting in GL(r), r >= 2
  /// Witness lower bound equals the ideal upper bound.
  bool proved() const { return witness_lower == upper_bound && ell == upper_bound; }
};

/// Matrix size r for which the GL(r) rank bound applies, if any.
inline std::optional<std::uint64_t> gl_shape(const FibreSpec& f) {
  if (f.kind == FibreKind::GL) return f.gl_size;
  if (f.kind == FibreKind::SL2PowerTimesTorus && f.sl2_power == 1 && f.torus_rank == 0) return 2;
  return std::nullopt;
}

/// Computes ell, the ideal upper bound and a verified witness over the
/// prime field. Throws HypothesisError for unusual fibres without the flag.
inline FibreReport certify_fibre(const FibreSpec& f) {
  FibreReport r;
  r.fibre = f;
  r.commutative = f.is_commutative();
  r.unusual = is_unusual(f);
  r.ell = fibre_ell(f);
  r.upper_bound = class_upper_bound(f);
  r.upper_source = upper_bound_source(f);
  r.lemma41 = lemma41_exponent_bound(f.ext);
  if (auto shape = gl_shape(f)) r.lemma44 = lemma44_exponent_bound(f.ext, *shape);
  TruncatedAlgebra A(f.ext);
  if (A.packable() && A.dimension() <= (std::uint64_t{1} << 16)) {
    Witness w = fibre_witness(f, A);
    if (!w.agrees()) {
      throw InvariantViolation("witness for " + f.to_string() + " disagrees with its closed form: " +
                               w.computed.to_string() + " vs " + w.predicted.to_string());
    }
    if (w.nontrivial()) r.witness_lower = w.certified_length;
    r.witness = std::move(w);
  }
  return r;
}

struct InvariantReport {
  std::vector<FibreReport> fibres;
  std::uint64_t N = 0;
  bool proved() const {
    return std::all_of(fibres.begin(), fibres.end(), [](const FibreReport& f) { return f.proved(); });
  }
};

/// N = max ell_i. Requires a non-commutative fibre and the hypothesis on
/// every unusual fibre.
inline InvariantReport predict_class(const std::vector<FibreSpec>& fibres) {
  if (fibres.empty()) throw UsageError("at least one fibre is required");
  if (std::all_of(fibres.begin(), fibres.end(), [](const FibreSpec& f) { return f.is_commutative(); })) {
    throw HypothesisError("theorem hypothesis: non-commutative group required (every fibre is a torus)");
  }
  for (const auto& f : fibres) require_hypothesis(f);
  InvariantReport rep;
  for (const auto& f : fibres) {
    rep.fibres.push_back(certify_fibre(f));
    rep.N = std::max(rep.N, rep.fibres.back().ell);
  }
  return rep;
}

}  // namespace weilrad
