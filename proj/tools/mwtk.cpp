// mwtk - command-line front end for the multiwavelet toolkit.
//
// One subcommand per pipeline stage / experiment:
//   design, factor, complete, show-system, cascade, transform, inverse,
//   denoise, quantize-report, quant-error, coding-gain, psnr.
//
// Exit codes: 0 success, 1 validation error (bad flags or inputs),
// 2 runtime failure (I/O, non-convergence).

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <ostream>
#include <string>
#include <vector>

#include "mw/bauer.hpp"
#include "mw/completion.hpp"
#include "mw/denoise.hpp"
#include "mw/design.hpp"
#include "mw/io.hpp"
#include "mw/lifting.hpp"
#include "mw/metrics.hpp"
#include "mw/system.hpp"
#include "mw/transform.hpp"

namespace {

struct Common {
  std::string system = "sa1";
  int b0 = 0;          // > 0 selects the quantized builtin
  std::string format = "text";
  std::string out;     // empty: stdout
};

// Builtin names or an MWSYS path; --b0 quantizes the sa1 builtin.
mw::MultiwaveletSystem pick_system(const Common& c) {
  if (c.b0 > 0) {
    if (c.system != "sa1")
      throw std::invalid_argument("--b0 only applies to the builtin 'sa1' system");
    return mw::quantized_sa1(c.b0);
  }
  if (c.system == "sa1") return mw::sa1();
  if (c.system == "haar") return mw::haar1();
  return mw::load_system(c.system);
}

// Print sink honoring --out.
struct Sink {
  std::ofstream file;
  std::ostream* os = &std::cout;

  explicit Sink(const std::string& path) {
    if (path.empty()) return;
    file.open(path);
    if (!file) throw std::runtime_error("cannot open output file " + path);
    os = &file;
  }
  std::ostream& out() { return *os; }
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void print_matrix(std::ostream& os, const std::string& label, const mw::Mat& m) {
  os << label << " =\n";
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) {
      char buf[40];
      std::snprintf(buf, sizeof buf, " %22.15g", m(i, j));
      os << buf;
    }
    os << "\n";
  }
}

// CSV rows "name,lag,row,col,value".
void csv_matrix(std::ostream& os, const std::string& name, int lag, const mw::Mat& m) {
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      os << name << "," << lag << "," << i << "," << j << "," << num(m(i, j)) << "\n";
}

bool csv(const Common& c) {
  if (c.format == "csv") return true;
  if (c.format == "text") return false;
  throw std::invalid_argument("--format must be 'text' or 'csv'");
}

mw::TransformMode parse_mode(const std::string& s) {
  if (s == "balanced") return mw::TransformMode::kBalanced;
  if (s == "nonbalanced") return mw::TransformMode::kNonBalanced;
  throw std::invalid_argument("--mode must be 'balanced' or 'nonbalanced'");
}

mw::ShrinkRule parse_rule(const std::string& s) {
  if (s == "hard") return mw::ShrinkRule::kHard;
  if (s == "soft") return mw::ShrinkRule::kSoft;
  throw std::invalid_argument("--rule must be 'hard' or 'soft'");
}

// --- subcommand bodies ------------------------------------------------

int cmd_design(const Common& c, int branch) {
  const mw::LaurentMatrix p = mw::solve_simple_product_filter({4, branch});
  const mw::LaurentScalar det = mw::lm_det(p);
  Sink sink(c.out);
  std::ostream& os = sink.out();
  if (csv(c)) {
    for (int k = p.lo(); k <= p.hi(); ++k) csv_matrix(os, "P", k, p.coeff(k));
    for (int k = det.lo(); k <= det.hi(); ++k)
      os << "detP," << k << ",0,0," << num(det.coeff(k)) << "\n";
    return 0;
  }
  os << "half-band product filter P(z) = P1^T z^-1 + P0 + P1 z, branch " << branch << "\n\n";
  for (int k = p.lo(); k <= p.hi(); ++k)
    print_matrix(os, "P[" + std::to_string(k) + "]  (coefficient of z^" + std::to_string(k) + ")",
                 p.coeff(k));
  os << "\ndet P coefficients (z^" << det.lo() << " .. z^" << det.hi() << "):\n";
  for (int k = det.lo(); k <= det.hi(); ++k) os << "  " << num(det.coeff(k)) << "\n";
  return 0;
}

int cmd_factor(const Common& c, int branch, double tol) {
  const mw::LaurentMatrix p = mw::solve_simple_product_filter({4, branch});
  const mw::BauerState st = mw::bauer_fixed_point(p, tol);
  if (!st.converged)
    throw std::runtime_error("fixed-point iteration did not reach tol = " + num(tol) +
                             " (residual " + num(st.residual) + ")");
  const auto [h0, h1] = mw::extract_factors(st.X, p);
  const double err = mw::verify_factorization(mw::LaurentMatrix::causal({h0, h1}), p);
  Sink sink(c.out);
  std::ostream& os = sink.out();
  if (csv(c)) {
    csv_matrix(os, "H", 0, h0);
    csv_matrix(os, "H", 1, h1);
    csv_matrix(os, "X", 0, st.X);
    os << "stat,iterations,0,0," << st.iter << "\n";
    os << "stat,residual,0,0," << num(st.residual) << "\n";
    os << "stat,factor_error,0,0," << num(err) << "\n";
    return 0;
  }
  os << "spectral factor of the branch-" << branch << " product filter\n";
  os << "fixed point reached after " << st.iter << " iterations, residual " << num(st.residual)
     << "\n\n";
  print_matrix(os, "X (limit, = H0 H0^T)", st.X);
  print_matrix(os, "H0", h0);
  print_matrix(os, "H1", h1);
  os << "\n||H(z) H(z)* - P(z)||_inf = " << num(err) << "\n";
  return 0;
}

int cmd_complete(const Common& c) {
  const mw::MultiwaveletSystem sys = pick_system(c);
  if (sys.m != 1)
    throw std::invalid_argument("completion expects a two-tap (m = 1) analysis pair");
  const mw::Mat h0 = sys.H[0];
  const mw::Mat h1 = sys.H[1];
  const mw::SymmetrySignature s = mw::detect_symmetry(h0, h1);
  const auto [g0_hat, g1_hat] = mw::orthogonal_complement(h0, h1);
  const auto [g0, g1] = mw::symmetric_completion(h0, h1, g0_hat, g1_hat, s);
  Sink sink(c.out);
  std::ostream& os = sink.out();
  if (csv(c)) {
    csv_matrix(os, "G", 0, g0);
    csv_matrix(os, "G", 1, g1);
    for (std::size_t i = 0; i < s.signs.size(); ++i)
      os << "sign,S," << i << ",0," << s.signs[i] << "\n";
    return 0;
  }
  os << "symmetry-constrained completion of " << sys.name << "\n";
  os << "channel symmetry signs:";
  for (int v : s.signs) os << " " << (v > 0 ? "+1" : "-1");
  os << "\n\n";
  print_matrix(os, "G0", g0);
  print_matrix(os, "G1", g1);
  return 0;
}

int cmd_show_system(const Common& c, const std::string& save) {
  const mw::MultiwaveletSystem sys = pick_system(c);
  if (!save.empty()) mw::save_system(sys, save);
  Sink sink(c.out);
  std::ostream& os = sink.out();
  if (csv(c)) {
    os << "meta,name,0,0," << sys.name << "\n";
    os << "meta,r,0,0," << sys.r << "\n";
    os << "meta,m,0,0," << sys.m << "\n";
    os << "meta,orthogonal,0,0," << (sys.orthogonal ? 1 : 0) << "\n";
    for (int k = 0; k <= sys.m; ++k) csv_matrix(os, "H", k, sys.H[static_cast<std::size_t>(k)]);
    for (int k = 0; k <= sys.m; ++k) csv_matrix(os, "G", k, sys.G[static_cast<std::size_t>(k)]);
    if (sys.S)
      for (std::size_t i = 0; i < sys.S->signs.size(); ++i)
        os << "sign,S," << i << ",0," << sys.S->signs[i] << "\n";
    if (sys.T)
      for (std::size_t i = 0; i < sys.T->signs.size(); ++i)
        os << "sign,T," << i << ",0," << sys.T->signs[i] << "\n";
  } else {
    os << "system " << sys.name << ": r = " << sys.r << ", m = " << sys.m
       << (sys.orthogonal ? ", orthonormal" : ", NOT orthonormal") << "\n";
    auto show_sig = [&](const char* tag, const std::optional<mw::SymmetrySignature>& sig) {
      if (!sig) return;
      os << tag << " signs:";
      for (int v : sig->signs) os << " " << (v > 0 ? "+1" : "-1");
      os << "\n";
    };
    show_sig("S", sys.S);
    show_sig("T", sys.T);
    os << "\n";
    for (int k = 0; k <= sys.m; ++k)
      print_matrix(os, "H" + std::to_string(k), sys.H[static_cast<std::size_t>(k)]);
    for (int k = 0; k <= sys.m; ++k)
      print_matrix(os, "G" + std::to_string(k), sys.G[static_cast<std::size_t>(k)]);
    if (sys.r == 2 && sys.m == 1) {
      const auto [dh, dg, dhg] = mw::gram_defect(sys);
      print_matrix(os, "Gram block H(z)H(z)* + H(-z)H(-z)*", dh);
      print_matrix(os, "Gram block G(z)G(z)* + G(-z)G(-z)*", dg);
      print_matrix(os, "Gram cross block", dhg);
    }
  }
  if (!save.empty()) std::cerr << "wrote " << save << "\n";
  return 0;
}

int cmd_cascade(const Common& c, int level) {
  const mw::MultiwaveletSystem sys = pick_system(c);
  const mw::SampledFunctions fx = mw::cascade_eval(sys, level);
  Sink sink(c.out);
  std::ostream& os = sink.out();
  os << "t";
  for (int ch = 0; ch < sys.r; ++ch) os << ",phi" << ch;
  for (int ch = 0; ch < sys.r; ++ch) os << ",psi" << ch;
  os << "\n";
  for (std::size_t i = 0; i < fx.grid.size(); ++i) {
    os << num(fx.grid[i]);
    for (int ch = 0; ch < sys.r; ++ch) os << "," << num(fx.phi(ch, static_cast<int>(i)));
    for (int ch = 0; ch < sys.r; ++ch) os << "," << num(fx.psi(ch, static_cast<int>(i)));
    os << "\n";
  }
  return 0;
}

int cmd_transform(const Common& c, const std::string& input, int levels,
                  const std::string& mode_s) {
  const mw::MultiwaveletSystem sys = pick_system(c);
  const mw::TransformMode mode = parse_mode(mode_s);
  const std::vector<double> x = mw::read_csv_signal(input);
  const mw::PrePostPair pp = mw::haar_prepost();
  const mw::WaveletPyramid pyr = mw::dmwt_forward_1d(
      x, sys, levels, mode, mode == mw::TransformMode::kBalanced ? &pp : nullptr);
  mw::save_pyramid(pyr, c.out);
  std::cerr << "decomposed " << x.size() << " samples to " << levels << " level(s); wrote "
            << c.out << "\n";
  return 0;
}

int cmd_inverse(const Common& c, const std::string& input) {
  const mw::MultiwaveletSystem sys = pick_system(c);
  const mw::WaveletPyramid pyr = mw::load_pyramid(input);
  const mw::PrePostPair pp = mw::haar_prepost();
  const std::vector<double> x = mw::dmwt_inverse_1d(
      pyr, sys, pyr.mode == mw::TransformMode::kBalanced ? &pp : nullptr);
  mw::write_csv_signal(x, c.out);
  std::cerr << "reconstructed " << x.size() << " samples; wrote " << c.out << "\n";
  return 0;
}

int cmd_denoise(const Common& c, const std::string& input, int levels, const std::string& mode_s,
                const std::string& rule_s, double sigma, std::uint64_t seed) {
  const mw::MultiwaveletSystem sys = pick_system(c);
  const mw::TransformMode mode = parse_mode(mode_s);
  const mw::ShrinkRule rule = parse_rule(rule_s);
  const mw::Image img = mw::read_pgm(input);
  mw::NoiseModel model;
  model.known = sigma > 0.0;
  model.sigma = model.known ? sigma : 1.0;
  model.seed = seed;
  const mw::PrePostPair pp = mw::haar_prepost();
  const mw::Mat out =
      mw::denoise_image(mw::image_to_matrix(img), sys, levels, rule, model, mode,
                        mode == mw::TransformMode::kBalanced ? &pp : nullptr);
  mw::write_pgm(mw::matrix_to_image(out), c.out);
  std::cerr << "denoised " << img.width << "x" << img.height << " image (J = " << levels << ", "
            << mode_s << ", " << rule_s << (model.known ? ", sigma given" : ", sigma estimated")
            << "); wrote " << c.out << "\n";
  return 0;
}

int cmd_quantize_report(const Common& c, const std::string& range) {
  int lo = 0, hi = 0;
  const std::size_t dots = range.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      lo = hi = std::stoi(range, &used);
      if (used != range.size()) throw std::invalid_argument(range);
    } else {
      std::string a = range.substr(0, dots), b = range.substr(dots + 2);
      lo = std::stoi(a, &used);
      if (used != a.size()) throw std::invalid_argument(range);
      hi = std::stoi(b, &used);
      if (used != b.size()) throw std::invalid_argument(range);
    }
  } catch (const std::exception&) {
    throw std::invalid_argument("--b0 expects an integer or a range like 1..14");
  }
  if (lo < 1 || hi < lo) throw std::invalid_argument("--b0 range must satisfy 1 <= lo <= hi");

  Sink sink(c.out);
  std::ostream& os = sink.out();
  const bool as_csv = csv(c);
  if (as_csv)
    os << "b0,k,value,error,adders\n";
  else
    os << "  b0      mantissa k    k * 2^-b0              error (sqrt3 - value)   CSD adders\n";
  for (int b0 = lo; b0 <= hi; ++b0) {
    const mw::DyadicApprox a = mw::dyadic_approx(b0);
    if (as_csv) {
      os << a.b0 << "," << a.k << "," << num(a.value) << "," << num(a.error) << "," << a.adders
         << "\n";
    } else {
      char buf[160];
      std::snprintf(buf, sizeof buf, "  %2d  %12lld    %-20.15g  %+.15f      %d\n", a.b0,
                    static_cast<long long>(a.k), a.value, a.error, a.adders);
      os << buf;
    }
  }
  return 0;
}

int cmd_quant_error(const Common& c, const std::string& input, int levels,
                    const std::string& mode_s, long long n) {
  const int b0 = c.b0 > 0 ? c.b0 : 1;
  Common quant = c;
  quant.system = "sa1";
  quant.b0 = b0;
  const mw::MultiwaveletSystem qsys = pick_system(quant);
  const mw::TransformMode mode = parse_mode(mode_s);
  const mw::PrePostPair pp = mw::haar_prepost();
  const mw::PrePostPair* ppp = mode == mw::TransformMode::kBalanced ? &pp : nullptr;

  std::vector<std::pair<std::string, std::vector<double>>> signals;
  if (!input.empty()) {
    signals.emplace_back(input, mw::read_csv_signal(input));
  } else {
    signals.emplace_back("piece_regular",
                         mw::gen_test_signal(mw::TestSignalKind::kPieceRegular, n));
    signals.emplace_back("piece_polynomial",
                         mw::gen_test_signal(mw::TestSignalKind::kPiecePolynomial, n));
  }

  Sink sink(c.out);
  std::ostream& os = sink.out();
  os << (csv(c) ? "J" : " J  ");
  for (const auto& [name, sig] : signals) os << (csv(c) ? "," + name : "  sup|eps| " + name);
  os << "\n";
  for (int j = 1; j <= levels; ++j) {
    if (csv(c))
      os << j;
    else
      os << " " << j << " ";
    for (const auto& [name, sig] : signals) {
      const auto pyr = mw::dmwt_forward_1d(sig, qsys, j, mode, ppp);
      const std::vector<double> back = mw::dmwt_inverse_1d(pyr, qsys, ppp);
      const double err = mw::sup_error(sig, back);
      if (csv(c))
        os << "," << num(err);
      else {
        char buf[64];
        std::snprintf(buf, sizeof buf, "  %20.12g", err);
        os << buf;
      }
    }
    os << "\n";
  }
  return 0;
}

int cmd_coding_gain(const Common& c, double rho) {
  const mw::MultiwaveletSystem sys = pick_system(c);
  const double cg = mw::coding_gain(sys, {rho, 4});
  Sink sink(c.out);
  std::ostream& os = sink.out();
  if (csv(c)) {
    os << "stat,coding_gain_db,0,0," << num(cg) << "\n";
    os << "stat,rho,0,0," << num(rho) << "\n";
    return 0;
  }
  os << "AR(1) coding gain of " << sys.name << " at rho = " << rho << ": " << num(cg) << " dB\n";
  return 0;
}

int cmd_psnr(const Common& c, const std::string& a_path, const std::string& b_path) {
  const mw::Mat a = mw::image_to_matrix(mw::read_pgm(a_path));
  const mw::Mat b = mw::image_to_matrix(mw::read_pgm(b_path));
  const mw::PsnrResult r = mw::psnr(a, b);
  Sink sink(c.out);
  std::ostream& os = sink.out();
  if (csv(c)) {
    os << "stat,mse,0,0," << num(r.mse) << "\n";
    os << "stat,psnr_db,0,0," << num(r.psnr) << "\n";
    return 0;
  }
  os << "mse  = " << num(r.mse) << "\n";
  os << "psnr = " << num(r.psnr) << " dB (peak 255)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"multiwavelet toolkit: product-filter design, spectral factorization,\n"
               "symmetric completion, discrete transforms, lifting quantization reports,\n"
               "image denoising and quality metrics"};
  app.require_subcommand(1);

  Common c;
  int branch = 0;
  double tol = 1e-12;
  int cascade_level = 8, fwd_levels = 1, den_levels = 2, qe_levels = 6;
  std::string fwd_mode = "nonbalanced", den_mode = "balanced", qe_mode = "balanced";
  std::string rule_s = "hard", save, b0_range = "1..14";
  std::string in_a, in_b;
  double sigma = 0.0, rho = 0.95;
  long long length = 1024;
  std::uint64_t seed = 1;

  auto add_common = [&](CLI::App* s, bool with_system = true) {
    s->add_option("--format", c.format, "output format: text|csv")->capture_default_str();
    s->add_option("--out", c.out, "write output to this file instead of stdout");
    if (with_system) {
      s->add_option("--system", c.system, "builtin name (sa1, haar) or MWSYS file path")
          ->capture_default_str();
      s->add_option("--b0", c.b0, "quantize the sa1 builtin to k * 2^-b0 coefficients");
    }
  };

  CLI::App* s_design = app.add_subcommand("design", "print the half-band product filter");
  s_design->add_option("--branch", branch, "closed-form solution branch 0..3")
      ->check(CLI::Range(0, 3))
      ->capture_default_str();
  add_common(s_design, false);

  CLI::App* s_factor =
      app.add_subcommand("factor", "spectral-factor the product filter by fixed point");
  s_factor->add_option("--branch", branch, "design branch 0..3")->check(CLI::Range(0, 3));
  s_factor->add_option("--tol", tol, "residual tolerance")->capture_default_str();
  add_common(s_factor, false);

  CLI::App* s_complete =
      app.add_subcommand("complete", "wavelet completion of the analysis pair");
  add_common(s_complete);

  CLI::App* s_show = app.add_subcommand("show-system", "print a filter bank and its structure");
  s_show->add_option("--save", save, "also write the system as an MWSYS file");
  add_common(s_show);

  CLI::App* s_cascade =
      app.add_subcommand("cascade", "sample phi/psi on a dyadic grid (CSV for plotting)");
  s_cascade->add_option("--levels", cascade_level, "dyadic grid refinement level")
      ->check(CLI::Range(1, 24))
      ->capture_default_str();
  add_common(s_cascade);

  CLI::App* s_fwd = app.add_subcommand("transform", "CSV signal -> MWPYR pyramid");
  s_fwd->add_option("input", in_a, "input CSV signal")->required();
  s_fwd->add_option("--levels", fwd_levels, "decomposition depth J")
      ->check(CLI::Range(1, 30))
      ->capture_default_str();
  s_fwd->add_option("--mode", fwd_mode, "balanced|nonbalanced")->capture_default_str();
  add_common(s_fwd);

  CLI::App* s_inv = app.add_subcommand("inverse", "MWPYR pyramid -> CSV signal");
  s_inv->add_option("input", in_a, "input MWPYR pyramid")->required();
  add_common(s_inv);

  CLI::App* s_den = app.add_subcommand("denoise", "vector-threshold denoising of a PGM image");
  s_den->add_option("input", in_a, "noisy 8-bit PGM image")->required();
  s_den->add_option("--levels", den_levels, "decomposition depth J")
      ->check(CLI::Range(1, 12))
      ->capture_default_str();
  s_den->add_option("--mode", den_mode, "balanced|nonbalanced")->capture_default_str();
  s_den->add_option("--rule", rule_s, "hard|soft")->capture_default_str();
  s_den->add_option("--sigma", sigma, "noise standard deviation; omit to estimate (MAD)");
  s_den->add_option("--seed", seed, "seed for Monte Carlo covariance (nonbalanced mode)");
  add_common(s_den);

  CLI::App* s_qr = app.add_subcommand("quantize-report",
                                      "dyadic approximations of sqrt3: mantissa, error, adders");
  s_qr->add_option("--b0", b0_range, "precision or range, e.g. 4 or 1..14")
      ->capture_default_str();
  add_common(s_qr, false);

  CLI::App* s_qe = app.add_subcommand(
      "quant-error", "per-level reconstruction error of the quantized bank");
  s_qe->add_option("input", in_a, "optional CSV signal (default: builtin test signals)");
  s_qe->add_option("--levels", qe_levels, "maximum depth J")
      ->check(CLI::Range(1, 16))
      ->capture_default_str();
  s_qe->add_option("--mode", qe_mode, "balanced|nonbalanced")->capture_default_str();
  s_qe->add_option("--length", length, "builtin signal length (power of two)")
      ->capture_default_str();
  add_common(s_qe);

  CLI::App* s_cg = app.add_subcommand("coding-gain", "AR(1) coding gain of a bank");
  s_cg->add_option("--rho", rho, "AR(1) correlation, |rho| < 1")->capture_default_str();
  add_common(s_cg);

  CLI::App* s_psnr = app.add_subcommand("psnr", "PSNR between two PGM images");
  s_psnr->add_option("a", in_a, "first image")->required();
  s_psnr->add_option("b", in_b, "second image")->required();
  add_common(s_psnr, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints message + usage (stderr for errors)
    return code == 0 ? 0 : 1;
  }

  try {
    if (s_design->parsed()) return cmd_design(c, branch);
    if (s_factor->parsed()) return cmd_factor(c, branch, tol);
    if (s_complete->parsed()) return cmd_complete(c);
    if (s_show->parsed()) return cmd_show_system(c, save);
    if (s_cascade->parsed()) return cmd_cascade(c, cascade_level);
    if (s_fwd->parsed()) {
      if (c.out.empty()) throw std::invalid_argument("transform requires --out <pyramid path>");
      return cmd_transform(c, in_a, fwd_levels, fwd_mode);
    }
    if (s_inv->parsed()) {
      if (c.out.empty()) throw std::invalid_argument("inverse requires --out <csv path>");
      return cmd_inverse(c, in_a);
    }
    if (s_den->parsed()) {
      if (c.out.empty()) throw std::invalid_argument("denoise requires --out <pgm path>");
      return cmd_denoise(c, in_a, den_levels, den_mode, rule_s, sigma, seed);
    }
    if (s_qr->parsed()) return cmd_quantize_report(c, b0_range);
    if (s_qe->parsed()) return cmd_quant_error(c, in_a, qe_levels, qe_mode, length);
    if (s_cg->parsed()) return cmd_coding_gain(c, rho);
    if (s_psnr->parsed()) return cmd_psnr(c, in_a, in_b);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
