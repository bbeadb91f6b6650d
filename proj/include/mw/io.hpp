#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mw/transform.hpp"

namespace mw {

/// Grayscale image, row-major real intensities with nominal range [0, 255].
struct Image {
  int width = 0;
  int height = 0;
  std::vector<double> data;

  double& at(int row, int col) { return data[static_cast<std::size_t>(row) * width + col]; }
  double at(int row, int col) const { return data[static_cast<std::size_t>(row) * width + col]; }
};

Mat image_to_matrix(const Image& img);
Image matrix_to_image(const Mat& m);

/// Binary 8-bit PGM ("P5", maxval <= 255) only.
Image read_pgm(const std::string& path);
/// Clamps to [0, 255] and rounds half-up at write time.
void write_pgm(const Image& img, const std::string& path);

/// CSV signals: one decimal number per line, '.' separator, LF endings.
std::vector<double> read_csv_signal(const std::string& path);
void write_csv_signal(const std::vector<double>& signal, const std::string& path);

/// Seeded white Gaussian noise; identical streams for identical seeds.
std::vector<double> gen_awgn(long long n, double sigma, std::uint64_t seed);

enum class TestSignalKind { kPieceRegular, kPiecePolynomial };

/// Deterministic piecewise benchmark signals sampled at t = i/n. The exact
/// segment formulas are fixed in the implementation: kPieceRegular mixes
/// sine/linear/cosine/exponential/quadratic/constant pieces with six jumps;
/// kPiecePolynomial is piecewise linear with four jumps, so within-segment
/// second differences vanish. n must be a power of two.
std::vector<double> gen_test_signal(TestSignalKind kind, long long n);

/// Text persistence for 1D pyramids; lossless roundtrip at 17 significant
/// digits. Parse errors carry "path:line:" prefixes.
void save_pyramid(const WaveletPyramid& pyr, const std::string& path);
WaveletPyramid load_pyramid(const std::string& path);

}  // namespace mw
