// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <boost/multiprecision/cpp_int.hpp>
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "helpers.hpp"
#include "nag/cli.hpp"
#include "nag/io.hpp"
#include "nag/witness.hpp"
#include "nag/zerodim.hpp"

using namespace nag;
using testing::system_of;

namespace {

const char* kCircles = "vars x, y;\nf1 = x^2 + y^2 - 1;\nf2 = (x-1)^2 + y^2 - 1;\n";
const char* kSphereLine = "vars x, y, z;\nf1 = (y^2+x^2+z^2-1)*x;\nf2 = (y^2+x^2+z^2-1)*y;\n";
const char* kFamily = "vars x, y;\nparams a, b, c;\nf1 = a*x^2 + b*y^2 - c;\nf2 = y;\n";
const char* kProjPoints = "vars x, y, z;\nf1 = y^2 - 4*z^2;\nf2 = 16*x^2 - y^2;\n";
const char* kProjCone = "vars x, y, z;\nf1 = (x^2+y^2-z^2)*(z-x);\nf2 = (x^2+y^2-z^2)*(z+y);\n";

struct Check {
  bool ok = true;
  std::ostringstream detail;
  void require(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      detail << (detail.tellp() > 0 ? "; " : "") << what;
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

using Shape = std::map<std::size_t, std::vector<std::size_t>>;

Shape shape(const NumericalVariety& nv) {
  Shape out;
  for (const auto& [dim, list] : nv.components)
    for (const auto& c : list) out[dim].push_back(c.degree());
  return out;
}

std::string show(const Shape& s) {
  std::ostringstream os;
  os << "{";
  for (const auto& [d, degs] : s) {
    os << " " << d << ":[";
    for (std::size_t i = 0; i < degs.size(); ++i) os << (i ? "," : "") << degs[i];
    os << "]";
  }
  os << " }";
  return os.str();
}

/// floor(sqrt(k) * 10^digits) as an exact decimal, scaled back to ExtReal.
ExtReal isqrt_oracle(unsigned k, int digits) {
  using boost::multiprecision::cpp_int;
  cpp_int scale = boost::multiprecision::pow(cpp_int(10), digits);
  cpp_int n = cpp_int(k) * scale * scale;
  cpp_int r = boost::multiprecision::sqrt(n);
  // The integer square root is exact (floor); confirm it.
  if (!(r * r <= n && (r + 1) * (r + 1) > n)) throw std::runtime_error("integer sqrt oracle failed");
  return ExtReal(r.str()) / ExtReal(scale.str());
}

double matching_digits(const ExtReal& value, const ExtReal& truth) {
  ExtReal err = abs(value - truth);
  if (err == 0) return 50;
  return static_cast<double>(-log10(err / abs(truth)));
}

std::vector<SolutionPoint> circle_solutions(std::uint64_t seed) {
  SolveOptions opts;
  opts.seed = seed;
  return zero_dim_solve(system_of(kCircles), opts);
}

// 1
void circle_intersection(Check& c) {
  testing::TempDir dir;
  auto file = dir.write("circles.sys", kCircles);
  auto t0 = std::chrono::steady_clock::now();
  auto o = cli::dispatch({"solve", file, "--seed", "7"});
  double elapsed = seconds_since(t0);
  c.require(o.exit_code == 0, "solve exit " + std::to_string(o.exit_code));
  if (o.exit_code) return;
  auto sols = solutions_from_json(Json::parse(o.out));
  c.require(sols.size() == 2, "solution count " + std::to_string(sols.size()));
  std::set<int> signs;
  for (const auto& s : sols) {
    const auto& p = s.coordinates;
    bool near = std::abs(p[0] - 0.5) < 1e-5 && std::abs(std::abs(p[1]) - 0.866025) < 1e-5 &&
                std::abs(p[1].imag()) < 1e-5;
    c.require(near, "coordinates off");
    signs.insert(p[1].real() > 0 ? 1 : -1);
    c.require(s.function_residual <= 1e-8, "functionResidual " + format_double(s.function_residual));
    c.require(s.cycle_number == 1, "cycleNumber " + std::to_string(s.cycle_number));
    c.require(s.last_t <= 1e-3, "lastT " + format_double(s.last_t));
  }
  c.require(signs.size() == 2, "both signs of y expected");
  c.require(elapsed < 1.0, "runtime " + format_double(elapsed) + " s");
  c.detail << (c.ok ? "" : "; ") << "runtime " << elapsed * 1000 << " ms";
}

// 2
void diagnostics_shape(Check& c) {
  testing::TempDir dir;
  auto file = dir.write("circles.sys", kCircles);
  auto o = cli::dispatch({"solve", file, "--seed", "7"});
  auto j = Json::parse(o.out);
  for (const auto& s : j["solutions"])
    for (const char* key : {"coordinates", "conditionNumber", "cycleNumber", "functionResidual", "lastT",
                            "maxPrecisionBits", "newtonResidual", "solutionNumber"})
      c.require(s.contains(key), std::string("missing field ") + key);
  for (const auto& s : solutions_from_json(j)) {
    bool in_range = s.condition_number >= 10 && s.condition_number <= 1000;
    c.require(in_range, "conditionNumber " + format_double(s.condition_number) + " outside [10, 1000]");
  }
}

// 3
void refinement(Check& c) {
  auto f = system_of(kCircles);
  auto refined = refine_solutions(f, circle_solutions(7), 20);
  const ExtReal truth = isqrt_oracle(3, 30) / 2;
  for (const auto& s : refined) {
    const ExtComplex& y = s.extended.at(1);
    double digits = matching_digits(abs(y.real()), truth);
    c.require(digits >= 19, "y matches sqrt(3)/2 to only " + std::to_string(digits) + " digits");
    c.require(abs(y.imag()) <= ExtReal("1e-19"), "imaginary part too large");
  }
  c.require(refined.size() == 2, "expected 2 refined solutions");
}

// 4
void deep_refinement(Check& c) {
  auto f = system_of("vars x, y; f1 = x^2 + y^2 - 1; f2 = x - y;");
  auto sols = zero_dim_solve(f);
  c.require(sols.size() == 2, "expected 2 solutions");
  auto refined = refine_solutions(f, sols, 29);
  const ExtReal truth = isqrt_oracle(2, 32) / 2;
  std::set<int> signs;
  for (const auto& s : refined)
    for (const auto& z : s.extended) {
      double digits = matching_digits(abs(z.real()), truth);
      c.require(digits >= 28, "coordinate matches sqrt(2)/2 to only " + std::to_string(digits) + " digits");
      c.require(abs(z.imag()) <= ExtReal("1e-28"), "imaginary part too large");
      signs.insert(z.real() > 0 ? 1 : -1);
    }
  c.require(signs.size() == 2, "expected both signs");
}

// 5
void parameter_homotopy_check(Check& c) {
  testing::TempDir dir;
  auto file = dir.write("family.sys", kFamily);
  auto o = cli::dispatch({"param", file, "--values", "1,1,1;2,3,4", "--seed", "7"});
  c.require(o.exit_code == 0, "param exit " + std::to_string(o.exit_code));
  if (o.exit_code) return;
  auto j = Json::parse(o.out);
  const double expect[2] = {1.0, 1.41421};
  for (std::size_t r = 0; r < 2; ++r) {
    const auto& run = j["runs"][r];
    c.require(run["pathCount"] == 2, "stage 2 used " + run["pathCount"].dump() + " paths");
    auto sols = solutions_from_json(run);
    c.require(sols.size() == 2, "run " + std::to_string(r) + " has " + std::to_string(sols.size()) + " solutions");
    std::set<int> signs;
    for (const auto& s : sols) {
      c.require(std::abs(std::abs(s.coordinates[0]) - expect[r]) < 1e-5 && std::abs(s.coordinates[1]) < 1e-5 &&
                    std::abs(s.coordinates[0].imag()) < 1e-5,
                "run " + std::to_string(r) + " coordinates off");
      signs.insert(s.coordinates[0].real() > 0 ? 1 : -1);
    }
    c.require(signs.size() == 2, "both signs expected");
  }
}

// 6
void decomposition(Check& c) {
  auto f = system_of(kSphereLine);
  int good = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    DecompositionOptions opts;
    opts.seed = seed;
    auto s = shape(numerical_irreducible_decomposition(f, opts));
    if (s == Shape{{1, {1}}, {2, {2}}}) ++good;
    else c.require(false, "seed " + std::to_string(seed) + " gave " + show(s));
  }
  c.detail << (c.ok ? "" : "; ") << good << "/10 seeds";
}

NumericalVariety sphere_line_nv() {
  DecompositionOptions opts;
  opts.seed = 1;
  return numerical_irreducible_decomposition(system_of(kSphereLine), opts);
}

// 7
void membership(Check& c) {
  auto nv = sphere_line_nv();
  Rng rng(77);
  auto sphere_point = sample(nv.component(2, 0), 1, rng).at(0);
  auto hits = membership_test(nv, {{0, 0, 0}, {5, 5, 5}, sphere_point}, 1);
  using Hits = std::vector<std::pair<std::size_t, std::size_t>>;
  c.require(hits[0] == Hits{{1, 0}}, "(0,0,0) not exactly on the dim-1 component");
  c.require(hits[1].empty(), "(5,5,5) reported on a component");
  c.require(hits[2] == Hits{{2, 0}}, "sphere sample not exactly on the dim-2 component");
}

// 8
void sampling(Check& c) {
  auto nv = sphere_line_nv();
  auto f = nv.system;
  Rng rng(88);
  auto pts = sample(nv.component(1, 0), 20, rng);
  c.require(pts.size() == 20, "sample count");
  double worst = 0, residual = 0;
  for (const auto& p : pts) {
    worst = std::max({worst, std::abs(p[0]), std::abs(p[1])});
    residual = std::max(residual, norm_inf(evaluate(f, p)));
  }
  c.require(worst <= 1e-8, "max |x|,|y| = " + format_double(worst));
  c.require(residual <= 1e-8, "max residual = " + format_double(residual));
}

std::set<std::pair<long, long>> projective_ratios(std::uint64_t seed, Check& c) {
  SolveOptions opts;
  opts.projective = true;
  opts.seed = seed;
  auto sols = zero_dim_solve(system_of(kProjPoints), opts);
  c.require(sols.size() == 4, "seed " + std::to_string(seed) + ": " + std::to_string(sols.size()) + " points");
  std::set<std::pair<long, long>> out;
  for (const auto& s : sols) {
    const auto& p = s.coordinates;
    Complex a = p[1] / p[2], b = p[1] / p[0];
    long ra = std::lround(a.real()), rb = std::lround(b.real());
    c.require(std::abs(a - Complex(ra, 0)) < 1e-5 && std::abs(b - Complex(rb, 0)) < 1e-5, "ratio off");
    out.insert({ra, rb});
  }
  return out;
}

// 9
void projective_zero_dim(Check& c) {
  auto a = projective_ratios(3, c);
  auto b = projective_ratios(1234, c);
  const std::set<std::pair<long, long>> expect{{2, 4}, {2, -4}, {-2, 4}, {-2, -4}};
  c.require(a == expect, "ratio pairs differ from {(+-2, +-4)}");
  c.require(a == b, "seeds disagree");
}

// 10
void projective_decomposition(Check& c) {
  DecompositionOptions opts;
  opts.projective = true;
  opts.seed = 10;
  auto nv = numerical_irreducible_decomposition(system_of(kProjCone), opts);
  auto s = shape(nv);
  c.require(s == Shape{{0, {1}}, {1, {2}}}, "shape " + show(s));
  if (!nv.components.count(0)) return;
  // Oracle: z = x and z = -y force [1 : -1 : 1].
  auto p = nv.component(0, 0).points.at(0);
  Complex scale = p[0];
  for (auto& v : p) v /= scale;
  c.require(testing::dist(p, {1, -1, 1}) < 1e-5, "dim-0 point does not normalize to [1:-1:1]");
}

// 11
void property_suites(Check& c) {
  Rng rng(1111);
  // Jacobian vs central differences.
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + rng.next_u64() % 3;
    std::vector<Polynomial> polys;
    for (std::size_t i = 0; i < n; ++i)
      polys.push_back(testing::random_dense(n, 1 + static_cast<std::uint32_t>(rng.next_u64() % 3), rng));
    PolySystem f(testing::names(n), {}, polys);
    CVector z = random_unit_vector(n, rng);
    auto jac = jacobian_eval(f, z);
    const double h = 1e-6;
    for (std::size_t k = 0; k < n; ++k) {
      CVector zp = z, zm = z;
      zp[k] += h;
      zm[k] -= h;
      auto fp = evaluate(f, zp), fm = evaluate(f, zm);
      for (std::size_t i = 0; i < n; ++i) {
        Complex fd = (fp[i] - fm[i]) / (2 * h);
        if (std::abs(fd - jac(i, k)) > 1e-6 * std::max(1.0, std::abs(jac(i, k)))) {
          c.require(false, "Jacobian/FD mismatch in trial " + std::to_string(trial));
          break;
        }
      }
    }
  }
  // Homotopy endpoint identities.
  {
    auto f = system_of(kCircles);
    auto g = total_degree_start(f).start_system;
    Complex gamma = random_unit_complex(rng);
    auto h = straight_line_homotopy(f, g, gamma);
    for (int k = 0; k < 100; ++k) {
      CVector z = random_unit_vector(2, rng);
      for (auto& v : z) v *= 3 * rng.uniform();
      auto h0 = homotopy_eval(h, z, 0).value, h1 = homotopy_eval(h, z, 1).value;
      auto fz = evaluate(f, z), gz = evaluate(g, z);
      for (std::size_t i = 0; i < 2; ++i) {
        if (std::abs(h0[i] - fz[i]) > 1e-12 || std::abs(h1[i] - gamma * gz[i]) > 1e-12) {
          c.require(false, "homotopy endpoint identity violated");
          break;
        }
      }
    }
  }
  // Bezout path-count conservation.
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 3;
    std::vector<Polynomial> polys;
    for (std::size_t i = 0; i < n; ++i)
      polys.push_back(testing::random_dense(n, 1 + static_cast<std::uint32_t>(rng.next_u64() % 3), rng));
    PolySystem f(testing::names(n), {}, polys);
    SolveOptions opts;
    opts.seed = rng.next_u64();
    auto report = zero_dim_solve_report(f, opts);
    const auto bezout = degrees(f).bezout;
    std::size_t total = 0;
    for (const auto& s : report.solutions) total += s.multiplicity;
    if (report.paths.size() != bezout || report.count(PathStatus::Success) != bezout || total != bezout ||
        report.solutions.size() != bezout)
      c.require(false, "Bezout count not conserved in dense trial " + std::to_string(trial) + " (" +
                           std::to_string(report.solutions.size()) + " of " + std::to_string(bezout) + ")");
  }
  // Dedupe idempotence.
  {
    SolveOptions opts;
    opts.seed = 3;
    auto report = zero_dim_solve_report(system_of("vars x,y; a = x^2*y - 1; b = (x - y)^3;"), opts);
    auto once = dedupe(report.paths);
    auto twice = dedupe(once);
    bool same = once.size() == twice.size();
    for (std::size_t i = 0; same && i < once.size(); ++i)
      same = once[i].coordinates == twice[i].coordinates && once[i].multiplicity == twice[i].multiplicity;
    c.require(same, "dedupe is not idempotent");
  }
  // Seed determinism.
  {
    testing::TempDir dir;
    auto circles = dir.write("c.sys", kCircles);
    auto sphere = dir.write("s.sys", kSphereLine);
    for (auto args : std::vector<std::vector<std::string>>{{"solve", circles, "--seed", "42"},
                                                           {"posdim", sphere, "--seed", "42"}}) {
      auto a = cli::dispatch(args), b = cli::dispatch(args);
      c.require(a.exit_code == 0 && a.out == b.out, args[0] + " output not byte-identical");
    }
  }
  // Monodromy block stability.
  {
    auto nv = sphere_line_nv();
    const auto& ws = nv.component(2, 0);
    Rng loops(5);
    auto blocks = monodromy_partition(ws, loops);
    for (const auto& b : blocks) c.require(trace_test(ws, b, loops), "monodromy block fails trace test");
    const std::size_t n = ws.system.num_variables();
    for (int k = 0; k < 5; ++k) {
      auto w1 = move_slice(ws, random_slice(n, ws.dimension, loops), loops);
      auto w2 = move_slice(w1, random_slice(n, ws.dimension, loops), loops);
      auto back = move_slice(w2, ws.slice, loops);
      for (const auto& b : blocks) {
        std::set<std::size_t> image, original(b.begin(), b.end());
        for (auto idx : b)
          for (std::size_t j = 0; j < ws.points.size(); ++j)
            if (testing::dist(back.points[idx], ws.points[j]) < kMatchTolerance) image.insert(j);
        c.require(image == original, "block moved under an extra loop");
      }
    }
  }
}

// 12
void parser_suite(Check& c) {
  Rng rng(1212);
  // Example inputs against hand-expanded forms.
  struct Case {
    const char* file;
    std::function<CVector(const CVector&, const CVector&)> expanded;
  };
  const std::vector<Case> cases{
      {"vars x,y; f1 = x^2+y^2-1; f2 = (x-1)^2+y^2-1;",
       [](const CVector& v, const CVector&) {
         Complex x = v[0], y = v[1];
         return CVector{x * x + y * y - 1.0, x * x - 2.0 * x + y * y};
       }},
      {"vars x,y; params a,b,c; f1 = a*x^2+b*y^2-c; f2 = y;",
       [](const CVector& v, const CVector& p) {
         return CVector{p[0] * v[0] * v[0] + p[1] * v[1] * v[1] - p[2], v[1]};
       }},
      {"vars x,y,z; f1 = (y^2+x^2+z^2-1)*x; f2 = (y^2+x^2+z^2-1)*y;",
       [](const CVector& v, const CVector&) {
         Complex x = v[0], y = v[1], z = v[2];
         return CVector{x * x * x + x * y * y + x * z * z - x, x * x * y + y * y * y + y * z * z - y};
       }},
      {"vars x,y,z; f1 = y^2-4*z^2; f2 = 16*x^2-y^2;",
       [](const CVector& v, const CVector&) {
         return CVector{v[1] * v[1] - 4.0 * v[2] * v[2], 16.0 * v[0] * v[0] - v[1] * v[1]};
       }},
      {"vars x,y,z; f1 = (x^2+y^2-z^2)*(z-x); f2 = (x^2+y^2-z^2)*(z+y);",
       [](const CVector& v, const CVector&) {
         Complex x = v[0], y = v[1], z = v[2];
         return CVector{-x * x * x + x * x * z - x * y * y + y * y * z + x * z * z - z * z * z,
                        x * x * y + x * x * z + y * y * y + y * y * z - y * z * z - z * z * z};
       }},
  };
  for (const auto& cs : cases) {
    auto spec = parse_input_file(cs.file);
    const auto& f = spec.system;
    for (int k = 0; k < 10; ++k) {
      CVector z = random_unit_vector(f.num_variables(), rng), p = random_unit_vector(f.num_parameters(), rng);
      for (auto& v : z) v *= 2 * rng.uniform();
      auto got = evaluate(f, z, p), want = cs.expanded(z, p);
      for (std::size_t i = 0; i < got.size(); ++i)
        if (std::abs(got[i] - want[i]) > 1e-12 * (1 + std::abs(want[i])))
          c.require(false, std::string("evaluation mismatch for ") + cs.file);
    }
    auto back = parse_input_file(to_source(f, false)).system;
    c.require(back == f, std::string("round trip changed ") + cs.file);
  }
  // Fuzzing: mutated valid files plus random printable text.
  const std::string seeds[] = {kCircles, kSphereLine, kFamily, std::string("projective;\n") + kProjCone};
  const std::string alphabet = "xyzabcI0123456789.eE+-*^()=;,% \n\tvarsparmojcti";
  int crashes = 0, rejected = 0, accepted = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    std::string s;
    if (trial % 5 == 4) {
      const std::size_t len = rng.next_u64() % 200;
      for (std::size_t k = 0; k < len; ++k) s.push_back(static_cast<char>(rng.next_u64() % 128));
    } else {
      s = seeds[rng.next_u64() % 4];
      const int edits = 1 + static_cast<int>(rng.next_u64() % 8);
      for (int k = 0; k < edits; ++k) {
        std::size_t pos = rng.next_u64() % (s.size() + 1);
        switch (rng.next_u64() % 4) {
          case 0:
            if (pos < s.size()) s.erase(pos, 1 + rng.next_u64() % 3);
            break;
          case 1:
            s.insert(pos, 1, alphabet[rng.next_u64() % alphabet.size()]);
            break;
          case 2:
            if (pos < s.size()) s[pos] = static_cast<char>(rng.next_u64() % 256);
            break;
          default:
            s.insert(pos, s.substr(rng.next_u64() % s.size(), rng.next_u64() % 12));
        }
      }
    }
    try {
      parse_input_file(s);
      ++accepted;
    } catch (const Error&) {
      ++rejected;
    } catch (...) {
      ++crashes;
    }
  }
  c.require(crashes == 0, std::to_string(crashes) + " fuzz inputs escaped with a non-library exception");
  c.detail << (c.ok ? "" : "; ") << "fuzz: " << accepted << " accepted, " << rejected << " rejected, " << crashes
           << " crashes";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, void (*)(Check&)>> criteria{
      {"circle intersection", circle_intersection},
      {"diagnostics shape", diagnostics_shape},
      {"refinement to 20 digits", refinement},
      {"deep refinement to 29 digits", deep_refinement},
      {"parameter homotopy", parameter_homotopy_check},
      {"sphere-line decomposition over 10 seeds", decomposition},
      {"membership", membership},
      {"sampling the line", sampling},
      {"projective zero-dimensional solve", projective_zero_dim},
      {"projective decomposition", projective_decomposition},
      {"property suites", property_suites},
      {"parser round trip and fuzzing", parser_suite},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Check c;
    auto t0 = std::chrono::steady_clock::now();
    try {
      criteria[i].second(c);
    } catch (const std::exception& e) {
      c.require(false, std::string("exception: ") + e.what());
    }
    const double secs = seconds_since(t0);
    c.require(secs < 60, "took " + std::to_string(secs) + " s");
    if (!c.ok) ++failed;
    std::printf("%s  criterion %2zu  %-42s %s\n", c.ok ? "PASS" : "FAIL", i + 1, criteria[i].first,
                c.detail.str().c_str());
  }
  std::printf("%d of %zu criteria failed\n", failed, criteria.size());
  return failed ? 1 : 0;
}
