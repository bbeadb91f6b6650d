#include "mw/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "mw/rng.hpp"

namespace mw {

Mat image_to_matrix(const Image& img) {
  Mat m(img.height, img.width);
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j) m(i, j) = img.at(i, j);
  return m;
}

Image matrix_to_image(const Mat& m) {
  Image img;
  img.height = static_cast<int>(m.rows());
  img.width = static_cast<int>(m.cols());
  img.data.resize(static_cast<std::size_t>(m.size()));
  for (int i = 0; i < img.height; ++i)
    for (int j = 0; j < img.width; ++j) img.at(i, j) = m(i, j);
  return img;
}

namespace {

// Next header token, skipping PGM '#' comments.
std::string pgm_token(std::istream& in, const std::string& path) {
  std::string tok;
  int c;
  while ((c = in.get()) != EOF) {
    if (c == '#') {
      while ((c = in.get()) != EOF && c != '\n') {
      }
      continue;
    }
    if (std::isspace(c)) {
      if (!tok.empty()) return tok;
      continue;
    }
    tok.push_back(static_cast<char>(c));
  }
  if (tok.empty()) throw std::runtime_error(path + ": truncated PGM header");
  return tok;
}

int pgm_int(std::istream& in, const std::string& path, const char* what) {
  const std::string tok = pgm_token(in, path);
  try {
    std::size_t used = 0;
    const int v = std::stoi(tok, &used);
    if (used != tok.size() || v < 0) throw std::invalid_argument(tok);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error(path + ": bad PGM " + what + " '" + tok + "'");
  }
}

}  // namespace

Image read_pgm(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("read_pgm: cannot open " + path);
  if (pgm_token(f, path) != "P5")
    throw std::runtime_error(path + ": not a binary PGM (magic must be P5)");
  Image img;
  img.width = pgm_int(f, path, "width");
  img.height = pgm_int(f, path, "height");
  const int maxval = pgm_int(f, path, "maxval");
  if (img.width < 1 || img.height < 1) throw std::runtime_error(path + ": empty PGM");
  if (maxval < 1 || maxval > 255)
    throw std::runtime_error(path + ": unsupported PGM maxval (8-bit only)");
  // The single whitespace byte after maxval was already consumed by the
  // tokenizer; pixel data starts here.
  const std::size_t n = static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height);
  std::vector<unsigned char> raw(n);
  f.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(f.gcount()) != n)
    throw std::runtime_error(path + ": truncated PGM payload");
  img.data.assign(raw.begin(), raw.end());
  return img;
}

void write_pgm(const Image& img, const std::string& path) {
  if (img.width < 1 || img.height < 1 ||
      img.data.size() != static_cast<std::size_t>(img.width) * static_cast<std::size_t>(img.height))
    throw std::invalid_argument("write_pgm: malformed image");
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("write_pgm: cannot open " + path);
  f << "P5\n" << img.width << " " << img.height << "\n255\n";
  std::vector<unsigned char> raw(img.data.size());
  for (std::size_t i = 0; i < img.data.size(); ++i) {
    const double v = std::floor(img.data[i] + 0.5);
    raw[i] = static_cast<unsigned char>(v < 0.0 ? 0.0 : (v > 255.0 ? 255.0 : v));
  }
  f.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
  if (!f) throw std::runtime_error("write_pgm: write failed for " + path);
}

std::vector<double> read_csv_signal(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("read_csv_signal: cannot open " + path);
  std::vector<double> out;
  std::string line;
  for (int ln = 1; std::getline(f, line); ++ln) {
    if (line.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(line, &used));
      while (used < line.size() && std::isspace(static_cast<unsigned char>(line[used]))) ++used;
      if (used != line.size()) throw std::invalid_argument(line);
    } catch (const std::exception&) {
      throw std::runtime_error(path + ":" + std::to_string(ln) + ": bad sample '" + line + "'");
    }
  }
  return out;
}

void write_csv_signal(const std::vector<double>& signal, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("write_csv_signal: cannot open " + path);
  char buf[32];
  for (double v : signal) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    f << buf << "\n";
  }
  if (!f) throw std::runtime_error("write_csv_signal: write failed for " + path);
}

std::vector<double> gen_awgn(long long n, double sigma, std::uint64_t seed) {
  if (n < 0) throw std::invalid_argument("gen_awgn: n must be >= 0");
  if (sigma < 0.0) throw std::invalid_argument("gen_awgn: sigma must be >= 0");
  std::vector<double> out(static_cast<std::size_t>(n));
  if (sigma == 0.0) return out;
  Rng rng(seed);
  for (double& x : out) x = sigma * rng.gaussian();
  return out;
}

namespace {

// Fixed segment formulas; both signals are pure functions of t = i/n, so a
// 2n-sample version downsamples exactly onto the n-sample one.
double piece_regular_at(double t) {
  if (t < 0.13) return 2.0 * std::sin(8.0 * M_PI * t);
  if (t < 0.25) return -2.0 + 10.0 * (t - 0.13);
  if (t < 0.40) return 1.5 * std::cos(6.0 * M_PI * (t - 0.25));
  if (t < 0.55) return -1.0 + 4.0 * std::exp(-30.0 * (t - 0.40));
  if (t < 0.70) return 1.8 - 24.0 * (t - 0.55) * (t - 0.55);
  if (t < 0.85) return -1.2;
  return 1.0 + std::sin(10.0 * M_PI * (t - 0.85));
}

double piece_polynomial_at(double t) {
  if (t < 0.20) return 1.0 + 2.0 * t;
  if (t < 0.45) return -1.0 + 3.0 * (t - 0.20);
  if (t < 0.70) return 2.0 - 4.0 * (t - 0.45);
  if (t < 0.90) return 0.5 + (t - 0.70);
  return -1.5 + 5.0 * (t - 0.90);
}

}  // namespace

std::vector<double> gen_test_signal(TestSignalKind kind, long long n) {
  if (n < 2 || (n & (n - 1)) != 0)
    throw std::invalid_argument("gen_test_signal: n must be a power of two >= 2");
  std::vector<double> out(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / static_cast<double>(n);
    out[static_cast<std::size_t>(i)] =
        kind == TestSignalKind::kPieceRegular ? piece_regular_at(t) : piece_polynomial_at(t);
  }
  return out;
}

void save_pyramid(const WaveletPyramid& pyr, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("save_pyramid: cannot open " + path);
  const int r = static_cast<int>(pyr.s.rows());
  f << "MWPYR 1\n";
  f << "mode " << (pyr.mode == TransformMode::kBalanced ? "balanced" : "nonbalanced") << "\n";
  f << "length0 " << pyr.length0 << " J " << pyr.J << " r " << r << "\n";
  char buf[32];
  auto dump = [&](const Mat& m) {
    for (long l = 0; l < m.cols(); ++l) {
      for (int i = 0; i < r; ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", m(i, l));
        f << (i ? " " : "") << buf;
      }
      f << "\n";
    }
  };
  f << "S " << pyr.s.cols() << "\n";
  dump(pyr.s);
  for (int j = 1; j <= pyr.J; ++j) {
    const Mat& d = pyr.d[static_cast<std::size_t>(j - 1)];
    f << "D " << j << " " << d.cols() << "\n";
    dump(d);
  }
  if (!f) throw std::runtime_error("save_pyramid: write failed for " + path);
}

namespace {

struct LineReader {
  std::string path;
  std::ifstream f;
  int line = 0;

  explicit LineReader(const std::string& p) : path(p), f(p) {
    if (!f) throw std::runtime_error("load_pyramid: cannot open " + p);
  }
  [[noreturn]] void fail(const std::string& msg) const {
    throw std::runtime_error(path + ":" + std::to_string(line) + ": " + msg);
  }
  std::istringstream next(const std::string& what) {
    std::string s;
    while (std::getline(f, s)) {
      ++line;
      const std::size_t hash = s.find('#');
      if (hash != std::string::npos) s.erase(hash);
      if (s.find_first_not_of(" \t\r") != std::string::npos) return std::istringstream(s);
    }
    ++line;
    fail("unexpected end of file while reading " + what);
  }
};

}  // namespace

WaveletPyramid load_pyramid(const std::string& path) {
  LineReader lr(path);
  {
    auto ss = lr.next("header");
    std::string magic;
    int version = 0;
    if (!(ss >> magic >> version) || magic != "MWPYR" || version != 1)
      lr.fail("expected 'MWPYR 1' header");
  }
  WaveletPyramid pyr;
  {
    auto ss = lr.next("mode line");
    std::string kw, mode;
    if (!(ss >> kw >> mode) || kw != "mode" || (mode != "balanced" && mode != "nonbalanced"))
      lr.fail("expected 'mode balanced|nonbalanced'");
    pyr.mode = mode == "balanced" ? TransformMode::kBalanced : TransformMode::kNonBalanced;
  }
  int r = 0;
  {
    auto ss = lr.next("size line");
    std::string k0, k1, k2;
    if (!(ss >> k0 >> pyr.length0 >> k1 >> pyr.J >> k2 >> r) || k0 != "length0" || k1 != "J" ||
        k2 != "r" || pyr.J < 1 || r < 1)
      lr.fail("expected 'length0 <n> J <j> r <r>'");
  }
  auto read_block = [&](const std::string& tag, int index, Mat& out) {
    auto ss = lr.next(tag + " block header");
    std::string kw;
    long cols = -1;
    ss >> kw;
    if (kw != tag) lr.fail("expected '" + tag + "' block");
    if (index > 0) {
      int j = 0;
      if (!(ss >> j) || j != index) lr.fail("detail blocks must appear in order");
    }
    if (!(ss >> cols) || cols < 1) lr.fail("bad column count in " + tag + " block");
    out.resize(r, cols);
    for (long l = 0; l < cols; ++l) {
      auto row = lr.next(tag + " block row");
      for (int i = 0; i < r; ++i)
        if (!(row >> out(i, l))) lr.fail("expected " + std::to_string(r) + " samples per row");
    }
  };
  read_block("S", 0, pyr.s);
  pyr.d.resize(static_cast<std::size_t>(pyr.J));
  for (int j = 1; j <= pyr.J; ++j) read_block("D", j, pyr.d[static_cast<std::size_t>(j - 1)]);
  return pyr;
}

}  // namespace mw
