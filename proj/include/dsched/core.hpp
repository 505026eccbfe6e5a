#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace dsched {

// Shape mismatch between containers that must agree.
struct StructuralError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Input that is syntactically fine but semantically empty (e.g. all-zero weights).
struct DegenerateInputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A state that a correct solver can never produce; aborts the episode.
struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Oracle instance too large to enumerate.
struct SizeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Dense row-major matrix of doubles.
class Mat {
 public:
  Mat() = default;
  Mat(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), v_(static_cast<size_t>(rows) * cols, fill) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  double& operator()(int i, int j) { return v_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return v_[static_cast<size_t>(i) * cols_ + j]; }
  const std::vector<double>& data() const { return v_; }
  std::vector<double>& data() { return v_; }

  double sum() const {
    double s = 0;
    for (double x : v_) s += x;
    return s;
  }
  double row_sum(int i) const {
    double s = 0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j);
    return s;
  }
  double col_sum(int j) const {
    double s = 0;
    for (int i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
  }
  bool same_shape(const Mat& o) const { return rows_ == o.rows_ && cols_ == o.cols_; }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> v_;
};

/// Dense tensor with three indices, used for the offload variables y(i, holder, trainer).
class Ten3 {
 public:
  Ten3() = default;
  Ten3(int d0, int d1, int d2, double fill = 0.0)
      : d0_(d0), d1_(d1), d2_(d2), v_(static_cast<size_t>(d0) * d1 * d2, fill) {}

  int dim0() const { return d0_; }
  int dim1() const { return d1_; }
  int dim2() const { return d2_; }
  double& operator()(int a, int b, int c) {
    return v_[(static_cast<size_t>(a) * d1_ + b) * d2_ + c];
  }
  double operator()(int a, int b, int c) const {
    return v_[(static_cast<size_t>(a) * d1_ + b) * d2_ + c];
  }
  double sum() const {
    double s = 0;
    for (double x : v_) s += x;
    return s;
  }

 private:
  int d0_ = 0, d1_ = 0, d2_ = 0;
  std::vector<double> v_;
};

inline void require(bool cond, const char* what) {
  if (!cond) throw StructuralError(what);
}

/// Seedable generator with a platform-independent uniform double derivation.
/// (std::uniform_real_distribution is implementation-defined; we derive the
/// mantissa from the raw 64-bit stream directly so traces replay everywhere.)
class Rng {
 public:
  explicit Rng(uint64_t seed) : s_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}

  uint64_t next_u64() {
    // xorshift-multiply (splitmix64); tiny, portable, good enough for loads.
    uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  /// Uniform in [0, 1).
  double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform integer in [0, n).
  uint64_t next_below(uint64_t n) { return next_u64() % n; }

  /// Derives an independent stream for a named purpose.
  static uint64_t substream(uint64_t seed, uint64_t stream_id) {
    Rng r(seed ^ (0xd1b54a32d192ed03ULL * (stream_id + 1)));
    return r.next_u64();
  }

 private:
  uint64_t s_;
};

}  // namespace dsched
