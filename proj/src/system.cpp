#include "mw/system.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace mw {

namespace {

constexpr double kOrthoTol = 1e-10;
constexpr double kSymTol = 1e-10;

bool pair_orthonormal(const std::vector<Mat>& a, const std::vector<Mat>& b, bool cross) {
  const int m = static_cast<int>(a.size()) - 1;
  const int r = static_cast<int>(a[0].rows());
  for (int l = -m; l <= m; ++l) {
    Mat sum = Mat::Zero(r, r);
    bool any = false;
    for (int k = 0; k <= m; ++k) {
      const int k2 = k + 2 * l;
      if (k2 < 0 || k2 > m) continue;
      sum += a[static_cast<std::size_t>(k)] * b[static_cast<std::size_t>(k2)].transpose();
      any = true;
    }
    if (!any) continue;
    const Mat want = (!cross && l == 0) ? Mat(Mat::Identity(r, r)) : Mat(Mat::Zero(r, r));
    if (inf_norm(sum - want) > kOrthoTol) return false;
  }
  return true;
}

// S with A_k = S A_{m-k} S for all k; first sign fixed to +1 (S and -S act
// identically here). nullopt when no signature fits.
std::optional<SymmetrySignature> detect_s(const std::vector<Mat>& a) {
  const int m = static_cast<int>(a.size()) - 1;
  const int r = static_cast<int>(a[0].rows());
  for (int bits = 0; bits < (1 << (r - 1)); ++bits) {
    SymmetrySignature sig;
    sig.signs.assign(static_cast<std::size_t>(r), 1);
    for (int i = 1; i < r; ++i)
      if (bits & (1 << (i - 1))) sig.signs[static_cast<std::size_t>(i)] = -1;
    const Mat s = sig.as_matrix();
    bool ok = true;
    for (int k = 0; k <= m && ok; ++k)
      ok = inf_norm(a[static_cast<std::size_t>(k)] -
                    s * a[static_cast<std::size_t>(m - k)] * s) <= kSymTol;
    if (ok) return sig;
  }
  return std::nullopt;
}

// T with G_k = T G_{m-k} S for all k; the sign of T is pinned relative to S,
// so all 2^r diagonals are candidates.
std::optional<SymmetrySignature> detect_t(const std::vector<Mat>& g, const Mat& s) {
  const int m = static_cast<int>(g.size()) - 1;
  const int r = static_cast<int>(g[0].rows());
  for (int bits = 0; bits < (1 << r); ++bits) {
    SymmetrySignature sig;
    sig.signs.assign(static_cast<std::size_t>(r), 1);
    for (int i = 0; i < r; ++i)
      if (bits & (1 << i)) sig.signs[static_cast<std::size_t>(i)] = -1;
    const Mat t = sig.as_matrix();
    bool ok = true;
    for (int k = 0; k <= m && ok; ++k)
      ok = inf_norm(g[static_cast<std::size_t>(k)] -
                    t * g[static_cast<std::size_t>(m - k)] * s) <= kSymTol;
    if (ok) return sig;
  }
  return std::nullopt;
}

}  // namespace

LaurentMatrix MultiwaveletSystem::h_symbol() const { return LaurentMatrix::causal(H); }
LaurentMatrix MultiwaveletSystem::g_symbol() const { return LaurentMatrix::causal(G); }

MultiwaveletSystem build_system(std::vector<Mat> h, std::vector<Mat> g, std::string name) {
  if (h.empty() || g.size() != h.size())
    throw std::invalid_argument("build_system: H and G need the same nonzero tap count");
  const int r = static_cast<int>(h[0].rows());
  for (const auto* list : {&h, &g})
    for (const Mat& c : *list)
      if (c.rows() != r || c.cols() != r)
        throw std::invalid_argument("build_system: all taps must be r x r");

  MultiwaveletSystem sys;
  sys.name = std::move(name);
  sys.r = r;
  sys.m = static_cast<int>(h.size()) - 1;
  sys.H = std::move(h);
  sys.G = std::move(g);
  sys.orthogonal = pair_orthonormal(sys.H, sys.H, false) &&
                   pair_orthonormal(sys.G, sys.G, false) &&
                   pair_orthonormal(sys.H, sys.G, true);
  sys.S = detect_s(sys.H);
  if (sys.S) sys.T = detect_t(sys.G, sys.S->as_matrix());
  return sys;
}

namespace {

// The SA1 template with the irrational coefficient left as a parameter.
MultiwaveletSystem sa1_family(double q, std::string name) {
  const double c = std::numbers::sqrt2 / 4.0;
  Mat h0(2, 2), h1(2, 2), g0(2, 2), g1(2, 2);
  h0 << 2, 0, q, 1;
  h1 << 2, 0, -q, 1;
  g0 << 0, 2, -1, q;
  g1 << 0, -2, 1, q;
  return build_system({c * h0, c * h1}, {c * g0, c * g1}, std::move(name));
}

}  // namespace

MultiwaveletSystem sa1() { return sa1_family(std::numbers::sqrt3, "SA1"); }

MultiwaveletSystem haar1() {
  const double c = 1.0 / std::numbers::sqrt2;
  Mat p(1, 1), n(1, 1);
  p << c;
  n << -c;
  return build_system({p, p}, {p, n}, "Haar");
}

MultiwaveletSystem quantized_sa1(int b0) {
  if (b0 < 1) throw std::invalid_argument("quantized_sa1: b0 must be >= 1");
  const double q = static_cast<double>(std::llround(std::numbers::sqrt3 * std::ldexp(1.0, b0))) *
                   std::ldexp(1.0, -b0);
  return sa1_family(q, "SA1-q" + std::to_string(b0));
}

SampledFunctions cascade_eval(const MultiwaveletSystem& sys, int level) {
  if (level < 1) throw std::invalid_argument("cascade_eval: level must be >= 1");
  const int r = sys.r;
  const int m = sys.m;
  const long scale = 1L << level;
  const long n = m * scale;  // half-open grid [0, m)
  const double sqrt2 = std::numbers::sqrt2;

  // Box seed: every channel starts as the indicator of [0, 1).
  Mat cur = Mat::Zero(r, n);
  for (long i = 0; i < std::min<long>(scale, n); ++i) cur.col(i).setOnes();

  Mat next = Mat::Zero(r, n);
  constexpr int kMaxIter = 100000;
  int it = 0;
  double best = std::numeric_limits<double>::infinity();
  int stalled = 0;
  for (; it < kMaxIter; ++it) {
    next.setZero();
    for (long i = 0; i < n; ++i) {
      for (int k = 0; k <= m; ++k) {
        const long j = 2 * i - k * scale;  // grid index of 2t - k
        if (j < 0 || j >= n) continue;
        next.col(i) += sqrt2 * (sys.H[static_cast<std::size_t>(k)] * cur.col(j));
      }
    }
    const double diff = inf_norm(next - cur);
    cur.swap(next);
    if (inf_norm(cur) > 1e6) throw std::runtime_error("cascade_eval: cascade diverged");
    // Iterate all the way down to the rounding floor; the plateau detector
    // ends the loop once rounding noise dominates the geometric tail.
    if (diff < 1e-15 * std::max(1.0, inf_norm(cur))) break;
    if (diff < 0.999 * best) {
      best = diff;
      stalled = 0;
    } else if (++stalled >= 200) {
      break;
    }
  }
  if (it == kMaxIter) throw std::runtime_error("cascade_eval: cascade did not converge");

  Mat psi = Mat::Zero(r, n);
  for (long i = 0; i < n; ++i) {
    for (int k = 0; k <= m; ++k) {
      const long j = 2 * i - k * scale;
      if (j < 0 || j >= n) continue;
      psi.col(i) += sqrt2 * (sys.G[static_cast<std::size_t>(k)] * cur.col(j));
    }
  }

  SampledFunctions out;
  out.level = level;
  out.grid.resize(static_cast<std::size_t>(n) + 1);
  for (long i = 0; i <= n; ++i) out.grid[static_cast<std::size_t>(i)] = std::ldexp(double(i), -level);
  out.phi.resize(r, n + 1);
  out.psi.resize(r, n + 1);
  out.phi.leftCols(n) = cur;
  out.psi.leftCols(n) = psi;
  out.phi.col(n) = 2.0 * cur.col(n - 1) - cur.col(n - 2);
  out.psi.col(n) = 2.0 * psi.col(n - 1) - psi.col(n - 2);
  return out;
}

void save_system(const MultiwaveletSystem& sys, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_system: cannot open " + path);
  f << "MWSYS 1\n";
  f << "name " << sys.name << "\n";
  f << "r " << sys.r << " m " << sys.m << "\n";
  char buf[32];
  auto dump = [&](const char* tag, const std::vector<Mat>& taps) {
    for (int k = 0; k <= sys.m; ++k) {
      f << tag << " " << k << "\n";
      const Mat& c = taps[static_cast<std::size_t>(k)];
      for (int i = 0; i < sys.r; ++i) {
        for (int j = 0; j < sys.r; ++j) {
          std::snprintf(buf, sizeof buf, "%.17g", c(i, j));
          f << (j ? " " : "") << buf;
        }
        f << "\n";
      }
    }
  };
  dump("H", sys.H);
  dump("G", sys.G);
  auto dump_sig = [&](const char* tag, const std::optional<SymmetrySignature>& s) {
    if (!s) return;
    f << tag;
    for (int v : s->signs) f << " " << v;
    f << "\n";
  };
  dump_sig("S", sys.S);
  dump_sig("T", sys.T);
  if (!f) throw std::runtime_error("save_system: write failed for " + path);
}

namespace {

// Whitespace tokens annotated with their source line; '#' starts a comment.
struct TokenStream {
  std::string path;
  std::vector<std::pair<std::string, int>> toks;
  std::size_t pos = 0;
  int last_line = 1;

  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(path + ":" + std::to_string(last_line) + ": " + msg);
  }
  bool done() const { return pos >= toks.size(); }
  std::string next(const std::string& what) {
    if (done()) fail("unexpected end of file while reading " + what);
    last_line = toks[pos].second;
    return toks[pos++].first;
  }
  std::string peek() const { return done() ? std::string() : toks[pos].first; }
  void expect(const std::string& tok, const std::string& what) {
    const std::string got = next(what);
    if (got != tok) fail("expected '" + tok + "' in " + what + ", got '" + got + "'");
  }
  long long next_int(const std::string& what) {
    const std::string t = next(what);
    try {
      std::size_t used = 0;
      const long long v = std::stoll(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail("expected an integer in " + what + ", got '" + t + "'");
    }
  }
  double next_double(const std::string& what) {
    const std::string t = next(what);
    try {
      std::size_t used = 0;
      const double v = std::stod(t, &used);
      if (used != t.size()) throw std::invalid_argument(t);
      return v;
    } catch (const std::exception&) {
      fail("expected a number in " + what + ", got '" + t + "'");
    }
  }
};

}  // namespace

MultiwaveletSystem load_system(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("load_system: cannot open " + path);

  TokenStream ts;
  ts.path = path;
  std::string line;
  for (int ln = 1; std::getline(f, line); ++ln) {
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ss(line);
    std::string tok;
    while (ss >> tok) ts.toks.emplace_back(tok, ln);
  }

  ts.expect("MWSYS", "header");
  if (ts.next_int("format version") != 1) ts.fail("unsupported format version");

  ts.expect("name", "name line");
  if (ts.done()) ts.fail("unexpected end of file while reading name");
  const int name_line = ts.toks[ts.pos].second;
  std::string name;
  while (!ts.done() && ts.toks[ts.pos].second == name_line) {
    if (!name.empty()) name += " ";
    name += ts.next("name");
  }

  ts.expect("r", "size line");
  const long long r_ll = ts.next_int("channel count r");
  ts.expect("m", "size line");
  const long long m_ll = ts.next_int("tap degree m");
  if (r_ll < 1 || r_ll > 64 || m_ll < 0 || m_ll > 1024) ts.fail("implausible r/m sizes");
  const int r = static_cast<int>(r_ll);
  const int m = static_cast<int>(m_ll);

  auto read_block = [&](const std::string& tag, int k) {
    const std::string what = tag + " " + std::to_string(k);
    ts.expect(tag, what + " block");
    if (ts.next_int(what + " index") != k) ts.fail("blocks must appear in order " + what);
    Mat c(r, r);
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < r; ++j) c(i, j) = ts.next_double(what + " entries");
    return c;
  };

  std::vector<Mat> h, g;
  for (int k = 0; k <= m; ++k) h.push_back(read_block("H", k));
  for (int k = 0; k <= m; ++k) g.push_back(read_block("G", k));

  auto read_sig = [&](const std::string& tag) -> std::optional<SymmetrySignature> {
    if (ts.peek() != tag) return std::nullopt;
    ts.expect(tag, "signature line");
    SymmetrySignature sig;
    for (int i = 0; i < r; ++i) {
      const long long v = ts.next_int(tag + " signs");
      if (v != 1 && v != -1) ts.fail(tag + " signs must be +1 or -1");
      sig.signs.push_back(static_cast<int>(v));
    }
    return sig;
  };
  read_sig("S");  // declared signatures are parse-validated only; detection
  read_sig("T");  // from the coefficients is exhaustive and wins on conflict
  if (!ts.done()) ts.fail("trailing content '" + ts.peek() + "'");

  return build_system(std::move(h), std::move(g), name);
}

}  // namespace mw
