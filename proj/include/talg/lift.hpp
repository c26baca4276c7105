#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "talg/tmatrix.hpp"

namespace talg {

// Dense row-major n-d array, last index fastest.
template <class T>
struct NdArray {
  std::vector<std::size_t> dims;
  std::vector<T> data;

  NdArray() = default;
  explicit NdArray(std::vector<std::size_t> d);  // zero-filled
  NdArray(std::vector<std::size_t> d, std::vector<T> values);

  std::size_t order() const noexcept { return dims.size(); }
  std::size_t size() const noexcept { return data.size(); }
};

using RealArray = NdArray<double>;
using ComplexArray = NdArray<cplx>;

ComplexArray to_complex(const RealArray& x);

enum class Anchor { inception, central };

struct LiftConfig {
  std::size_t window_h = 3;
  std::size_t window_w = 3;
  Anchor anchor = Anchor::inception;
  double padding = 0.0;
  std::size_t repetitions = 1;

  void validate() const;
  // Offsets of the window rows (or columns) relative to the pixel.
  std::vector<long> row_offsets() const;
  std::vector<long> col_offsets() const;
};

// Prepends (h, w) axes; the last two axes of x are the spatial ones.
template <class T>
NdArray<T> lift_once(const NdArray<T>& x, const LiftConfig& cfg);
// cfg.repetitions applications of lift_once.
template <class T>
NdArray<T> lift_k(const NdArray<T>& x, const LiftConfig& cfg);
// Index 0 on the two leading axes.
template <class T>
NdArray<T> inception_slice(const NdArray<T>& x);

// How an H x W x C image becomes a t-vector (cols == 1):
//   channel       shape (C),          D = H*W      (no lifting)
//   flatten       shape (h,w,...),    D = H*W*C    (channels lifted separately)
//   channel_into  shape (h,w,...,C),  D = H*W
enum class Layout { channel, flatten, channel_into };
Layout parse_layout(const std::string& name);
std::string to_string(Layout layout);

// image: dims (H, W) or (H, W, C).
SpatialTMatrix image_to_tvector(const RealArray& image, Layout layout, const LiftConfig& cfg);
// Exact inverse of image_to_tvector (takes the real part of the inception entries).
RealArray tvector_to_image(const SpatialTMatrix& tv, Layout layout,
                           const std::vector<std::size_t>& image_dims);

// H x W t-matrix of the lifted image; shape (h,w,...) for grayscale and
// (h,w,...,C) for colour.
SpatialTMatrix image_to_tmatrix(const RealArray& image, const LiftConfig& cfg);
RealArray tmatrix_to_image(const SpatialTMatrix& tm, const std::vector<std::size_t>& image_dims);

}  // namespace talg
