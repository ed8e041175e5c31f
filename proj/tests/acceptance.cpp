// Acceptance checks, one PASS/FAIL line per criterion.
// Usage: acceptance [--only N]

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "weilrad/cli.hpp"
#include "weilrad/weilrad.hpp"

using namespace weilrad;

namespace {

struct Verdict {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      notes.push_back("FAILED " + what);
    }
  }
  void note(const std::string& what) { notes.push_back(what); }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string str(std::uint64_t v) { return std::to_string(v); }

ExperimentConfig experiment(GroupTag tag, ExtensionSpec ext, std::uint32_t degree = 1) {
  ExperimentConfig cfg;
  cfg.group = tag;
  cfg.ext = std::move(ext);
  cfg.field_degree = degree;
  return cfg;
}

std::vector<cli::GridRow> default_grid() {
  std::ifstream in(WEILRAD_DEFAULT_GRID, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return cli::parse_grid(buf.str());
}

// Brute-force group for a grid row. Borel2 rows use the Borel2m model where
// the filtration by powers of m is concerned.
std::pair<GroupTag, ExtensionSpec> filtered_target(const std::string& fibre) {
  auto [tag, ext] = cli::group_target(fibre);
  if (tag.kind == GroupKind::Borel2) tag = GroupTag::borel2m();
  return {tag, ext};
}

std::uint64_t q_of(const ExtensionSpec& s) { return detail::checked_power(s.p(), s.exponents().front()); }

// ---------------------------------------------------------------------------

void criterion1(Verdict& v) {
  const ExtensionSpec ext(2, {1});
  auto rep = predict_class({FibreSpec::sl2(ext)});
  v.require(rep.N == 1, "predicted N = " + str(rep.N) + ", expected 1");
  for (std::uint32_t d : {1u, 2u}) {
    auto cls = brute_class(experiment(GroupTag::sl2(), ext, d)).nilpotency_class;
    v.require(cls == 1, "brute class over F" + str(d == 1 ? 2 : 4) + " = " + str(cls));
    v.note("F" + str(d == 1 ? 2 : 4) + " class " + str(cls));
  }
  v.note("N=" + str(rep.N));
}

void criterion2(Verdict& v) {
  const ExtensionSpec ext(2, {1, 1});
  auto rep = predict_class({FibreSpec::sl2(ext)});
  v.require(rep.N == 2, "predicted N = " + str(rep.N) + ", expected 2");
  auto cls = brute_class(experiment(GroupTag::sl2(), ext)).nilpotency_class;
  v.require(cls == 2, "brute class over F2 = " + str(cls));

  TruncatedAlgebra A(ext);
  const auto m1 = A.generator(0), m2 = A.generator(1);
  v.require(m1 * m2 != A.zero(), "m1 m2 != 0");
  auto u1 = UnipotentElement::make(GroupTag::sl2(), AlgebraMatrix::of(A.one(), m1, A.zero(), A.one()));
  auto u2 = UnipotentElement::make(GroupTag::sl2(), AlgebraMatrix::of(A.one(), A.zero(), m2, A.one()));
  v.require(u1 * u2 != u2 * u1, "u1 u2 != u2 u1");
  v.note("N=2, F2 class " + str(cls) + ", u1u2 = [" + (u1 * u2).matrix().to_string() + "], u2u1 = [" +
         (u2 * u1).matrix().to_string() + "]");
}

void criterion3(Verdict& v) {
  struct Row {
    FibreSpec f;
    std::uint64_t q;
  };
  std::vector<Row> rows;
  for (std::uint32_t e : {1u, 2u, 3u}) {
    rows.push_back({FibreSpec::gl(2, ExtensionSpec(2, {e})), 0});
    rows.push_back({FibreSpec::pgl2(ExtensionSpec(2, {e})), 0});
  }
  for (std::uint32_t e : {1u, 2u}) {
    rows.push_back({FibreSpec::gl(2, ExtensionSpec(3, {e})), 0});
    rows.push_back({FibreSpec::pgl2(ExtensionSpec(3, {e})), 0});
    rows.push_back({FibreSpec::sl2(ExtensionSpec(3, {e})), 0});
  }
  for (auto& [f, q] : rows) {
    q = q_of(f.ext);
    const auto t0 = Clock::now();
    FibreReport r = certify_fibre(f);
    const double t = seconds_since(t0);
    const std::string label = f.to_string();
    v.require(r.upper_bound == q - 1, label + " upper " + str(r.upper_bound) + " != q-1 = " + str(q - 1));
    v.require(r.witness_lower == q - 1, label + " witness " + str(r.witness_lower) + " != q-1 = " + str(q - 1));
    v.require(r.proved(), label + " not proved");
    v.require(t < 1.0, label + " took " + std::to_string(t) + " s");
  }
  v.note(str(rows.size()) + " certificates with witness lower = ideal upper = q-1");
}

void criterion4(Verdict& v) {
  for (std::uint32_t e : {1u, 2u, 3u}) {
    const ExtensionSpec ext(2, {e});
    const std::uint64_t q = q_of(ext), target = q / 2;
    const auto t0 = Clock::now();
    const std::uint64_t ell = unusual_class_invariant(ext);
    // Upper bound: J_ell = 0, and J_{ell-1} != 0 shows it is the least such level.
    const bool upper_ok = lemma38_ideals(ext, ell).second.is_zero() &&
                          (ell < 2 || !lemma38_ideals(ext, ell - 1).second.is_zero());
    std::uint64_t lower = 1;
    if (target >= 2) {
      Witness w = sl2_char2_witness(TruncatedAlgebra(ext));
      v.require(w.valid(), ext.to_string() + " squares witness invalid");
      lower = w.certified_length;
    } else {
      // q = 2: m^2 = 0 and the radical is abelian; a non-identity point gives class >= 1.
      try {
        sl2_char2_witness(TruncatedAlgebra(ext));
        v.require(false, ext.to_string() + " unexpected squares witness");
      } catch (const NoWitness&) {
      }
    }
    const double t = seconds_since(t0);
    v.require(upper_ok, ext.to_string() + " ideal bound");
    v.require(ell == target, ext.to_string() + " ell = " + str(ell) + ", expected q/2 = " + str(target));
    v.require(lower == target, ext.to_string() + " witness lower = " + str(lower));
    v.require(t < 1.0, ext.to_string() + " took " + std::to_string(t) + " s");
    v.note("q=" + str(q) + ": " + str(ell));
  }
}

void criterion5(Verdict& v) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(5);
  std::size_t configs = 0, failures = 0;
  for (const auto& row : default_grid()) {
    auto [tag, ext] = filtered_target(row.fibre);
    for (std::uint32_t d : row.fields) {
      TruncatedAlgebra A(ext, CoefficientField(ext.p(), d));
      const std::uint64_t n = A.nilpotency_index();
      if (n < 2) continue;
      ++configs;
      for (int k = 0; k < 1000; ++k) {
        const std::uint64_t i = 1 + rng() % (n - 1);
        auto g = sample_unipotent(tag, A, rng, 1), h = sample_unipotent(tag, A, rng, i);
        if (!filtration_member(commutator(g, h), i + 1)) ++failures;
      }
    }
  }
  const double t = seconds_since(t0);
  v.require(failures == 0, str(failures) + " commutators left U_{i+1}");
  v.require(t < 30.0, "took " + std::to_string(t) + " s");
  v.note(str(configs) + " configurations x 1000 pairs");
}

void criterion6(Verdict& v) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(6);
  std::size_t failures = 0, checked = 0, inclusions = 0;
  const std::vector<ExtensionSpec> specs = {ExtensionSpec(2, {2}), ExtensionSpec(2, {1, 1}),
                                            ExtensionSpec(2, {1, 1, 1}), ExtensionSpec(2, {3, 1}),
                                            ExtensionSpec(2, {2, 2}), ExtensionSpec(2, {3})};
  for (const auto& spec : specs) {
    TruncatedAlgebra A(spec);
    const std::uint64_t n = A.nilpotency_index();
    for (int k = 0; k < 1000; ++k) {
      const std::uint64_t r = rng() % n;
      auto M = sample_sl2_filtration_element(A, r, rng);
      auto m = random_element(A, rng, 1);
      auto M1 = UnipotentElement::make(GroupTag::sl2(), AlgebraMatrix::of(A.one(), m, A.zero(), A.one()));
      auto M1t = UnipotentElement::make(GroupTag::sl2(), M1.matrix().transpose());
      auto u = A.one() + m;
      auto M2 = UnipotentElement::make(GroupTag::sl2(), AlgebraMatrix::diagonal({u, u.inverse()}));
      const UnipotentElement& X = k % 3 == 0 ? M1 : k % 3 == 1 ? M1t : M2;
      ++checked;
      if (!sl2_filtration_member(M, r) || !sl2_filtration_member(commutator(X, M), r + 1)) ++failures;
    }
    const MonomialIdeal m = MonomialIdeal::maximal(spec), sq = squares_ideal(spec);
    for (std::uint64_t r = 1; r <= n; ++r) {
      auto [I, J] = lemma38_ideals(spec, r);
      auto [I1, J1] = lemma38_ideals(spec, r + 1);
      for (bool ok : {J.contains(I), I1.contains(sq * I), J1.contains(sq * J), J1.contains(m * I), J.contains(J1)}) {
        ++inclusions;
        if (!ok) ++failures;
      }
    }
  }
  const double t = seconds_since(t0);
  v.require(failures == 0, str(failures) + " failures");
  v.require(t < 30.0, "took " + std::to_string(t) + " s");
  v.note(str(checked) + " commutators, " + str(inclusions) + " ideal inclusions");
}

void criterion7(Verdict& v) {
  const auto t0 = Clock::now();
  for (std::size_t r = 1; r <= 3; ++r) {
    const ExtensionSpec ext(2, std::vector<std::uint32_t>(r, 1));
    ExperimentConfig cfg = experiment(GroupTag::gl(2), ext);
    ExponentResult res = brute_exponent(cfg);
    const std::string mode = res.exhaustive ? "exhaustive" : "sampled";
    v.require(res.max_order == 4, "r=" + str(r) + " max order " + str(res.max_order) + " (" + mode + "), expected 4");
    v.require(res.exhaustive == (r <= 2), "r=" + str(r) + " mode " + mode);

    // (I + M)^4 = I on every enumerated (or sampled) point.
    TruncatedAlgebra A(ext);
    std::uint64_t bad = 0, seen = 0;
    auto check = [&](const UnipotentElement& g) {
      ++seen;
      if (!g.pow(4).is_identity()) ++bad;
    };
    if (res.exhaustive) {
      UnipotentEnumeration(cfg.group, A, cfg.budget).for_each(check);
    } else {
      std::mt19937_64 rng(cfg.seed);
      for (std::uint64_t k = 0; k < cfg.samples; ++k) check(sample_unipotent(cfg.group, A, rng));
    }
    v.require(bad == 0, "r=" + str(r) + ": " + str(bad) + " points with (I+M)^4 != I");
    v.note("r=" + str(r) + " max order " + str(res.max_order) + " " + mode + " over " + str(seen) + " points");
  }
  const double t = seconds_since(t0);
  v.require(t < 60.0, "took " + std::to_string(t) + " s");
}

void criterion8(Verdict& v) {
  const auto t0 = Clock::now();
  for (std::uint32_t e : {1u, 2u}) {
    ExponentResult res = brute_exponent(experiment(GroupTag::torus(1), ExtensionSpec(2, {e})));
    const std::uint64_t expected = std::uint64_t{1} << e;
    v.require(res.exhaustive && res.max_order == expected,
              "e=" + str(e) + " max order " + str(res.max_order) + ", expected " + str(expected));
    v.note("e=" + str(e) + ": " + str(res.max_order));
  }
  v.require(seconds_since(t0) < 1.0, "time limit");
}

void criterion9(Verdict& v) {
  const auto t0 = Clock::now();
  for (auto ext : {ExtensionSpec(2, {1}), ExtensionSpec(2, {2}), ExtensionSpec(3, {1})}) {
    TruncatedAlgebra A(ext);
    const std::uint64_t n = A.nilpotency_index();
    AlgebraMatrix X = gln_superdiagonal_witness(A, n);
    auto g = UnipotentElement::make(GroupTag::gl(n), AlgebraMatrix::identity(A, n) + X);
    const std::uint32_t s = p_power_order(g);
    std::uint32_t minimal = 0;
    for (std::uint64_t pw = 1; pw < n; pw *= ext.p()) ++minimal;
    v.require(s == minimal, ext.to_string() + " order exponent " + str(s) + ", expected " + str(minimal));
    v.require(s == lemma41_exponent_bound(ext), ext.to_string() + " differs from the rank bound");
    v.note(ext.to_string() + " n=" + str(n) + " order " + str(detail::checked_power(ext.p(), s)));
  }
  v.require(seconds_since(t0) < 1.0, "time limit");
}

void criterion10(Verdict& v) {
  const auto t0 = Clock::now();
  cli::Options o;
  Json doc = cli::run_grid(default_grid(), o);
  std::size_t violations = 0, compared = 0;
  for (const auto& row : doc["rows"]) {
    const auto& b = row["bounds"];
    ++compared;
    if (!b["lemma41_ok"].get<bool>()) {
      ++violations;
      v.note("row " + row["config"]["fibre"].get<std::string>() + " exceeds the rank bound");
    }
    if (b["lemma44_ok"].is_boolean()) {
      ++compared;
      if (!b["lemma44_ok"].get<bool>()) {
        ++violations;
        v.note("row " + row["config"]["fibre"].get<std::string>() + " exceeds the GL(r) bound");
      }
    }
    // Exhaustive exponents over the larger coefficient fields as well.
    if (row["oracle"].contains("class")) {
      for (const auto& c : row["oracle"]["class"]) {
        if (!c["computed"].get<bool>()) continue;
        ++compared;
        const auto e = c["exponent"].get<std::uint32_t>();
        if (e > b["lemma41"].get<std::uint32_t>()) ++violations;
        if (b["lemma44"].is_number() && e > b["lemma44"].get<std::uint32_t>()) ++violations;
      }
    }
  }
  const double t = seconds_since(t0);
  v.require(violations == 0, str(violations) + " bound violations");
  v.require(t < 120.0, "took " + std::to_string(t) + " s");
  v.note(str(doc["rows"].size()) + " rows, " + str(compared) + " comparisons");
}

void criterion11(Verdict& v) {
  const auto t0 = Clock::now();
  const std::vector<std::vector<std::uint32_t>> exps = {{1}, {2}, {1, 1}, {2, 1}};
  for (const auto& e : exps) {
    ExperimentConfig cfg = experiment(GroupTag::borel2(), ExtensionSpec(2, e));
    cfg.budget = std::uint64_t{1} << 22;
    BorelRecord r = borel_exponent_experiment(cfg);
    const std::string label = cfg.ext.to_string();
    v.require(r.brute.exhaustive, label + " not exhaustive");
    v.require(r.dichotomy_holds, label + (r.primitive ? " primitive" : " imprimitive") + ": Borel2 exponent " +
                                     str(r.brute.exponent) + ", expected " + str(r.expected));
    if (!r.primitive) {
      v.require(r.witness_exponent == r.expected, label + " witness exponent");
    }
    v.note(label + " Borel2 " + str(r.brute.exponent) + " Borel2m " + str(r.kernel.exponent) + " expected " +
           str(r.expected) + (r.witness_exponent ? " witness " + str(*r.witness_exponent) : ""));
  }
  v.require(seconds_since(t0) < 60.0, "time limit");
}

void criterion12(Verdict& v) {
  const auto t0 = Clock::now();
  std::size_t compared = 0, discrepancies = 0, skipped = 0;
  for (const auto& row : default_grid()) {
    if (cli::is_borel_target(row.fibre)) continue;
    if (std::find(row.fields.begin(), row.fields.end(), 2u) == row.fields.end()) continue;
    ExperimentConfig cfg = experiment(cli::group_target(row.fibre).first, cli::group_target(row.fibre).second);
    StabilizationLevel a = stabilization_level(cfg, 1), b = stabilization_level(cfg, 2);
    if (!a.computed || !b.computed) {
      ++skipped;
      continue;
    }
    ++compared;
    if (a.nilpotency_class != b.nilpotency_class) {
      ++discrepancies;
      v.note(row.fibre + ": " + a.field + " class " + str(a.nilpotency_class) + ", " + b.field + " class " +
             str(b.nilpotency_class));
    }
  }
  const double t = seconds_since(t0);
  v.require(compared > 0, "no rows compared");
  v.require(discrepancies == 0, str(discrepancies) + " discrepancies");
  v.require(t < 120.0, "took " + std::to_string(t) + " s");
  v.note(str(compared) + " rows compared, " + str(skipped) + " over budget");
}

void criterion13(Verdict& v) {
  std::ostringstream a, b, err;
  const int ca = cli::run({"report", "--seed", "0"}, a, err, nullptr);
  const int cb = cli::run({"report", "--seed", "0"}, b, err, nullptr);
  v.require(ca == 0 && cb == 0, "report exit codes " + str(ca) + ", " + str(cb) + ": " + err.str());
  v.require(a.str() == b.str(), "outputs differ");
  v.note(str(a.str().size()) + " bytes");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::function<void(Verdict&)>> criteria = {
      criterion1, criterion2, criterion3,  criterion4,  criterion5,  criterion6, criterion7,
      criterion8, criterion9, criterion10, criterion11, criterion12, criterion13};
  std::size_t only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--only" && i + 1 < argc) {
      only = std::stoul(argv[++i]);
    } else {
      std::cerr << "usage: acceptance [--only N]\n";
      return 2;
    }
  }
  if (only > criteria.size()) {
    std::cerr << "no criterion " << only << "\n";
    return 2;
  }
  bool all = true;
  for (std::size_t i = 1; i <= criteria.size(); ++i) {
    if (only && only != i) continue;
    Verdict v;
    const auto t0 = Clock::now();
    try {
      criteria[i - 1](v);
    } catch (const std::exception& e) {
      v.require(false, std::string("exception: ") + e.what());
    }
    std::ostringstream line;
    line << "criterion " << i << ": " << (v.pass ? "PASS" : "FAIL");
    for (const auto& n : v.notes) line << " | " << n;
    line.precision(2);
    line << std::fixed << " [" << seconds_since(t0) << " s]";
    std::cout << line.str() << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
