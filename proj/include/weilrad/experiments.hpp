#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_set>
#include <vector>

#include "weilrad/dense.hpp"
#include "weilrad/error.hpp"
#include "weilrad/extension.hpp"
#include "weilrad/field.hpp"
#include "weilrad/invariants.hpp"
#include "weilrad/unipotent.hpp"

namespace weilrad {

inline constexpr std::uint64_t kDefaultBudget = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kDefaultSamples = std::uint64_t{1} << 14;

struct ExperimentConfig {
  GroupTag group = GroupTag::gl(2);
  ExtensionSpec ext{2, {1}};
  std::uint32_t field_degree = 1;
  std::uint64_t budget = kDefaultBudget;
  std::uint64_t seed = 0;
  std::vector<std::uint32_t> field_degrees;  // stabilization levels
  std::uint64_t samples = kDefaultSamples;
  unsigned workers = 1;

  TruncatedAlgebra algebra(std::uint32_t degree = 0) const {
    return TruncatedAlgebra(ext, CoefficientField(ext.p(), degree ? degree : field_degree));
  }
  std::string field_name(std::uint32_t degree = 0) const {
    return "F" + std::to_string(detail::checked_power(ext.p(), degree ? degree : field_degree));
  }
};

/// "q^E" description of a group order.
inline std::string order_text(std::uint64_t q, std::uint64_t exponent) {
  return std::to_string(q) + "^" + std::to_string(exponent);
}

/// A subgroup of a DenseGroup grown by adding generators. Closure is under
/// right multiplication by the generators, so each addition only multiplies
/// old elements by the new generator and new elements by every generator.
class SubgroupClosure {
 public:
  explicit SubgroupClosure(const DenseGroup& G) : G_(&G) { insert(G.identity()); }

  SubgroupClosure(const SubgroupClosure&) = delete;
  SubgroupClosure& operator=(const SubgroupClosure&) = delete;

  std::size_t size() const { return elems_.size(); }
  bool contains(const DenseGroup::Elem& g) const { return index_.count(std::string_view(g)) != 0; }
  const std::vector<DenseGroup::Elem>& generators() const { return gens_; }
  const std::deque<DenseGroup::Elem>& elements() const { return elems_; }

  /// Returns false when g is already inside.
  bool add_generator(const DenseGroup::Elem& g) {
    if (contains(g)) return false;
    gens_.push_back(g);
    const std::size_t old = elems_.size();
    for (std::size_t i = 0; i < old; ++i) insert(G_->mul(elems_[i], g));
    for (std::size_t i = old; i < elems_.size(); ++i) {
      for (const auto& h : gens_) insert(G_->mul(elems_[i], h));
    }
    return true;
  }

  /// Adds conjugates of the generators by `ambient` until the subgroup is
  /// normalised by every element of `ambient`.
  void close_normal(const std::vector<DenseGroup::Elem>& ambient) {
    for (std::size_t i = 0; i < gens_.size(); ++i) {
      for (const auto& y : ambient) {
        DenseGroup::Elem c = G_->conjugate(y, gens_[i]);
        add_generator(c);
      }
    }
  }

 private:
  void insert(DenseGroup::Elem g) {
    if (contains(g)) return;
    elems_.push_back(std::move(g));
    index_.insert(std::string_view(elems_.back()));
  }

  const DenseGroup* G_;
  std::deque<DenseGroup::Elem> elems_;
  std::unordered_set<std::string_view> index_;
  std::vector<DenseGroup::Elem> gens_;
};

/// Lower central series of the finite group of points.
struct SeriesResult {
  std::uint64_t group_order = 0;
  std::vector<std::uint64_t> sizes;        // |gamma_1|, |gamma_2|, ..., ending with 1
  std::uint64_t nilpotency_class = 0;      // number of non-trivial terms
  std::vector<std::size_t> generator_counts;
  std::vector<std::string> level_witnesses;  // a generator of gamma_i for i >= 2, matrix text
  bool lagrange_ok = true;
};

inline DenseGroup make_dense_group(const ExperimentConfig& cfg, std::uint32_t degree = 0) {
  return DenseGroup(cfg.group, cfg.algebra(degree));
}

inline void require_within_budget(const DenseGroup& G, std::uint64_t budget) {
  if (G.order() == UINT64_MAX || G.order() > budget) {
    throw BudgetExceeded(G.ring().field_size(), G.order_exponent(), budget);
  }
}

/// gamma_1 = G and gamma_{i+1} = [gamma_i, G]. If gamma_i is the normal
/// closure of X and G = <Y>, then gamma_{i+1} is the normal closure of
/// {[x, y] : x in X, y in Y}.
inline SeriesResult brute_class(const DenseGroup& G, std::uint64_t budget) {
  require_within_budget(G, budget);
  SeriesResult out;
  out.group_order = G.order();
  const auto Y = G.generators();

  std::vector<DenseGroup::Elem> level_gens;
  {
    SubgroupClosure whole(G);
    for (const auto& y : Y) whole.add_generator(y);
    if (whole.size() != G.order()) {
      throw InvariantViolation("generators of " + G.tag().to_string() + " span " + std::to_string(whole.size()) +
                               " of " + std::to_string(G.order()) + " points");
    }
    out.sizes.push_back(whole.size());
    out.generator_counts.push_back(whole.generators().size());
    level_gens = whole.generators();
  }
  while (out.sizes.back() > 1) {
    SubgroupClosure next(G);
    for (const auto& x : level_gens) {
      for (const auto& y : Y) next.add_generator(G.commutator(x, y));
    }
    next.close_normal(Y);
    if (next.size() >= out.sizes.back()) {
      throw InvariantViolation("lower central series of " + G.tag().to_string() + " stalled at size " +
                               std::to_string(next.size()));
    }
    out.sizes.push_back(next.size());
    out.generator_counts.push_back(next.generators().size());
    if (!next.generators().empty()) out.level_witnesses.push_back(G.to_matrix(next.generators().front()).to_string());
    level_gens = next.generators();
  }
  out.nilpotency_class = out.sizes.size() - 1;
  for (auto s : out.sizes) out.lagrange_ok = out.lagrange_ok && out.group_order % s == 0;
  return out;
}

inline SeriesResult brute_class(const ExperimentConfig& cfg) { return brute_class(make_dense_group(cfg), cfg.budget); }

/// Largest p-power order among the examined points.
struct ExponentResult {
  std::uint32_t exponent = 0;  // s, with max order p^s
  std::uint64_t max_order = 1;
  std::string witness;  // matrix text of an attaining point
  bool exhaustive = false;
  std::uint64_t examined = 0;
  std::uint64_t group_order = 0;  // UINT64_MAX if it does not fit
  std::string group_order_text;
  std::vector<std::uint64_t> histogram;  // histogram[s] = points of order p^s
};

namespace detail {

struct ExponentPartial {
  std::uint32_t exponent = 0;
  std::uint64_t witness_index = UINT64_MAX;
  std::vector<std::uint64_t> histogram;
};

inline ExponentPartial exponent_range(const DenseGroup& G, std::uint64_t begin, std::uint64_t end) {
  ExponentPartial part;
  for (std::uint64_t i = begin; i < end; ++i) {
    std::uint32_t s = G.p_power_order(G.at(i));
    if (part.histogram.size() <= s) part.histogram.resize(s + 1, 0);
    ++part.histogram[s];
    if (part.witness_index == UINT64_MAX || s > part.exponent) {
      part.exponent = s;
      part.witness_index = i;
    }
  }
  return part;
}

}  // namespace detail

/// Exhaustive when the group fits the budget. Otherwise, when sampling is
/// allowed, draws cfg.samples uniform points from a generator seeded by cfg.seed.
/// Exhaustive runs may be split across cfg.workers index ranges; the merge
/// keeps the smallest attaining index, so the result does not depend on the split.
inline ExponentResult brute_exponent(const DenseGroup& G, const ExperimentConfig& cfg, bool allow_sampling = true) {
  ExponentResult out;
  out.group_order = G.order();
  out.group_order_text = order_text(G.ring().field_size(), G.order_exponent());
  const std::uint64_t p = G.ring().algebra().spec().p();
  auto note = [&](std::uint32_t s) {
    if (out.histogram.size() <= s) out.histogram.resize(s + 1, 0);
  };
  if (G.order() != UINT64_MAX && G.order() <= cfg.budget) {
    out.exhaustive = true;
    const unsigned workers = std::max(1u, cfg.workers);
    std::vector<detail::ExponentPartial> parts(workers);
    const std::uint64_t chunk = (G.order() + workers - 1) / workers;
    if (workers == 1) {
      parts[0] = detail::exponent_range(G, 0, G.order());
    } else {
      std::vector<std::thread> pool;
      for (unsigned w = 0; w < workers; ++w) {
        const std::uint64_t b = std::min(G.order(), w * chunk), e = std::min(G.order(), b + chunk);
        pool.emplace_back([&, w, b, e] { parts[w] = detail::exponent_range(G, b, e); });
      }
      for (auto& t : pool) t.join();
    }
    std::uint64_t witness_index = UINT64_MAX;
    for (const auto& part : parts) {
      for (std::size_t s = 0; s < part.histogram.size(); ++s) {
        note(static_cast<std::uint32_t>(s));
        out.histogram[s] += part.histogram[s];
      }
      if (part.witness_index == UINT64_MAX) continue;
      if (witness_index == UINT64_MAX || part.exponent > out.exponent ||
          (part.exponent == out.exponent && part.witness_index < witness_index)) {
        out.exponent = part.exponent;
        witness_index = part.witness_index;
      }
    }
    out.examined = G.order();
    out.witness = G.to_matrix(G.at(witness_index)).to_string();
  } else {
    if (!allow_sampling) throw BudgetExceeded(G.ring().field_size(), G.order_exponent(), cfg.budget);
    std::mt19937_64 rng(cfg.seed);
    DenseGroup::Elem best;
    for (std::uint64_t k = 0; k < cfg.samples; ++k) {
      DenseGroup::Elem g = G.sample(rng);
      std::uint32_t s = G.p_power_order(g);
      note(s);
      ++out.histogram[s];
      if (best.empty() || s > out.exponent) {
        out.exponent = s;
        best = g;
      }
    }
    out.examined = cfg.samples;
    out.witness = G.to_matrix(best).to_string();
  }
  out.max_order = 1;
  for (std::uint32_t i = 0; i < out.exponent; ++i) out.max_order *= p;
  return out;
}

inline ExponentResult brute_exponent(const ExperimentConfig& cfg, bool allow_sampling = true) {
  return brute_exponent(make_dense_group(cfg), cfg, allow_sampling);
}

/// Exponent of the Borel2 radical against the primitive/imprimitive
/// dichotomy (e versus e + 1), the e + s bound (s = 1 for the GL2 unipotent
/// radical, h = 2) and the conjectural Coxeter prediction. The same
/// dichotomy is recorded for Borel2m, where the upper entry lies in m.
struct BorelRecord {
  ExponentResult brute;
  std::uint32_t e = 0;
  bool primitive = true;
  std::uint32_t expected = 0;  // e or e + 1
  bool dichotomy_holds = false;
  std::uint32_t e_plus_s_bound = 0;
  bool within_bound = false;
  std::optional<std::string> witness;  // imprimitive witness
  std::optional<std::uint32_t> witness_exponent;
  CoxeterQuestionData coxeter;
  bool coxeter_matches = false;
  ExponentResult kernel;  // Borel2m
  bool kernel_dichotomy_holds = false;
};

inline BorelRecord borel_exponent_experiment(const ExperimentConfig& cfg) {
  if (cfg.group.kind != GroupKind::Borel2) throw UsageError("the Borel experiment needs the Borel2 group");
  BorelRecord r{brute_exponent(cfg), cfg.ext.extension_exponent(), cfg.ext.is_primitive(), 0, false, 0, false,
                std::nullopt, std::nullopt, coxeter_question_data(GroupTag::gl(2), cfg.ext), false, {}, false};
  r.expected = r.primitive ? r.e : r.e + 1;
  r.dichotomy_holds = r.brute.exponent == r.expected;
  r.e_plus_s_bound = r.e + 1;
  r.within_bound = r.brute.exponent <= r.e_plus_s_bound;
  if (!r.primitive) {
    TruncatedAlgebra A = cfg.algebra();
    AlgebraMatrix w = imprimitive_borel_witness(A);
    r.witness = w.to_string();
    r.witness_exponent = p_power_order(UnipotentElement::make(GroupTag::borel2m(), w));
  }
  r.coxeter_matches = r.coxeter.predicted == r.brute.exponent;
  ExperimentConfig kcfg = cfg;
  kcfg.group = GroupTag::borel2m();
  r.kernel = brute_exponent(kcfg);
  r.kernel_dichotomy_holds = r.kernel.exponent == r.expected;
  return r;
}

enum class Stabilization { Stabilized, Disagree, Inconclusive };

inline const char* to_string(Stabilization s) {
  switch (s) {
    case Stabilization::Stabilized: return "STABILIZED";
    case Stabilization::Disagree: return "DISAGREE";
    case Stabilization::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

struct StabilizationLevel {
  std::uint32_t degree = 1;
  std::string field;
  bool computed = false;
  std::uint64_t nilpotency_class = 0;
  std::optional<std::uint32_t> exponent;
  std::string skipped_reason;
};

struct StabilizationResult {
  Stabilization status = Stabilization::Inconclusive;
  std::vector<StabilizationLevel> levels;
};

/// Class and exhaustive exponent over F_{p^degree}, or the reason it was skipped.
inline StabilizationLevel stabilization_level(const ExperimentConfig& cfg, std::uint32_t degree) {
  StabilizationLevel lvl;
  lvl.degree = degree;
  lvl.field = cfg.field_name(degree);
  DenseGroup G = make_dense_group(cfg, degree);
  if (G.order() == UINT64_MAX || G.order() > cfg.budget) {
    lvl.skipped_reason = "group order " + order_text(G.ring().field_size(), G.order_exponent()) + " exceeds budget";
    return lvl;
  }
  lvl.computed = true;
  lvl.nilpotency_class = brute_class(G, cfg.budget).nilpotency_class;
  lvl.exponent = brute_exponent(G, cfg, false).exponent;
  return lvl;
}

/// Fewer than two computed levels is inconclusive.
inline Stabilization classify_levels(const std::vector<StabilizationLevel>& levels) {
  const StabilizationLevel* first = nullptr;
  std::size_t computed = 0;
  bool agree = true;
  for (const auto& l : levels) {
    if (!l.computed) continue;
    ++computed;
    if (!first) {
      first = &l;
      continue;
    }
    agree = agree && first->nilpotency_class == l.nilpotency_class && first->exponent == l.exponent;
  }
  if (computed < 2) return Stabilization::Inconclusive;
  return agree ? Stabilization::Stabilized : Stabilization::Disagree;
}

/// Compares brute_class (and the exhaustive exponent) across the field
/// degrees that fit the budget.
inline StabilizationResult stabilization_details(const ExperimentConfig& cfg) {
  if (cfg.field_degrees.size() < 2) throw UsageError("stabilization needs at least two coefficient-field degrees");
  StabilizationResult out;
  for (std::uint32_t d : cfg.field_degrees) out.levels.push_back(stabilization_level(cfg, d));
  out.status = classify_levels(out.levels);
  return out;
}

inline bool stabilization_check(const ExperimentConfig& cfg) {
  return stabilization_details(cfg).status == Stabilization::Stabilized;
}

}  // namespace weilrad
