#include "talg/lift.hpp"

#include <algorithm>

#include "talg/errors.hpp"

namespace talg {

template <class T>
NdArray<T>::NdArray(std::vector<std::size_t> d) : dims(std::move(d)) {
  std::size_t n = 1;
  for (std::size_t v : dims) n *= v;
  data.assign(n, T{});
}

template <class T>
NdArray<T>::NdArray(std::vector<std::size_t> d, std::vector<T> values)
    : dims(std::move(d)), data(std::move(values)) {
  std::size_t n = 1;
  for (std::size_t v : dims) n *= v;
  if (n != data.size()) throw ShapeError("array data does not match its dimensions");
}

template struct NdArray<double>;
template struct NdArray<cplx>;

ComplexArray to_complex(const RealArray& x) {
  return ComplexArray(x.dims, std::vector<cplx>(x.data.begin(), x.data.end()));
}

void LiftConfig::validate() const {
  if (window_h == 0 || window_w == 0) throw DimensionError("lift window must be at least 1x1");
}

namespace {

std::vector<long> offsets(std::size_t n, Anchor anchor) {
  std::vector<long> o(n);
  const long shift = anchor == Anchor::central ? long(n - 1) / 2 : 0;
  for (std::size_t a = 0; a < n; ++a) o[a] = long(a) - shift;
  return o;
}

struct ImageDims {
  std::size_t h, w, c;
};

ImageDims image_dims_of(const std::vector<std::size_t>& dims) {
  if (dims.size() == 2) return {dims[0], dims[1], 1};
  if (dims.size() == 3) return {dims[0], dims[1], dims[2]};
  throw ShapeError("image must have dims (H, W) or (H, W, C)");
}

// (H, W, C) -> (C, H, W) planes, as complex.
ComplexArray to_planes(const RealArray& image) {
  const ImageDims d = image_dims_of(image.dims);
  ComplexArray p({d.c, d.h, d.w});
  for (std::size_t y = 0; y < d.h; ++y)
    for (std::size_t x = 0; x < d.w; ++x)
      for (std::size_t ch = 0; ch < d.c; ++ch)
        p.data[(ch * d.h + y) * d.w + x] = image.data[(y * d.w + x) * d.c + ch];
  return p;
}

}  // namespace

std::vector<long> LiftConfig::row_offsets() const { return offsets(window_h, anchor); }
std::vector<long> LiftConfig::col_offsets() const { return offsets(window_w, anchor); }

template <class T>
NdArray<T> lift_once(const NdArray<T>& x, const LiftConfig& cfg) {
  cfg.validate();
  if (x.order() < 2) throw ShapeError("lifting needs at least two (spatial) axes");
  const std::size_t m1 = x.dims[x.order() - 2];
  const std::size_t m2 = x.dims[x.order() - 1];
  const std::size_t prefix = m1 * m2 == 0 ? 0 : x.size() / (m1 * m2);
  const std::vector<long> ro = cfg.row_offsets();
  const std::vector<long> co = cfg.col_offsets();

  std::vector<std::size_t> dims{cfg.window_h, cfg.window_w};
  dims.insert(dims.end(), x.dims.begin(), x.dims.end());
  NdArray<T> out(std::move(dims));
  const T pad = static_cast<T>(cfg.padding);
  const std::size_t block = x.size();
  for (std::size_t a = 0; a < cfg.window_h; ++a)
    for (std::size_t b = 0; b < cfg.window_w; ++b) {
      T* dst = out.data.data() + (a * cfg.window_w + b) * block;
      for (std::size_t p = 0; p < prefix; ++p) {
        const T* src = x.data.data() + p * m1 * m2;
        for (std::size_t i = 0; i < m1; ++i) {
          const long si = long(i) + ro[a];
          for (std::size_t j = 0; j < m2; ++j) {
            const long sj = long(j) + co[b];
            const bool inside = si >= 0 && si < long(m1) && sj >= 0 && sj < long(m2);
            dst[(p * m1 + i) * m2 + j] = inside ? src[si * long(m2) + sj] : pad;
          }
        }
      }
    }
  return out;
}

template <class T>
NdArray<T> lift_k(const NdArray<T>& x, const LiftConfig& cfg) {
  NdArray<T> cur = x;
  for (std::size_t r = 0; r < cfg.repetitions; ++r) cur = lift_once(cur, cfg);
  return cur;
}

template <class T>
NdArray<T> inception_slice(const NdArray<T>& x) {
  if (x.order() < 4) throw ShapeError("inception slice needs two leading window axes plus two spatial axes");
  std::vector<std::size_t> dims(x.dims.begin() + 2, x.dims.end());
  const std::size_t block = x.size() / (x.dims[0] * x.dims[1]);
  return NdArray<T>(std::move(dims), std::vector<T>(x.data.begin(), x.data.begin() + block));
}

template RealArray lift_once(const RealArray&, const LiftConfig&);
template ComplexArray lift_once(const ComplexArray&, const LiftConfig&);
template RealArray lift_k(const RealArray&, const LiftConfig&);
template ComplexArray lift_k(const ComplexArray&, const LiftConfig&);
template RealArray inception_slice(const RealArray&);
template ComplexArray inception_slice(const ComplexArray&);

Layout parse_layout(const std::string& name) {
  if (name == "channel") return Layout::channel;
  if (name == "flatten") return Layout::flatten;
  if (name == "channel-into" || name == "channel_into") return Layout::channel_into;
  throw FormatError("unknown layout '" + name + "' (expected channel, flatten or channel-into)");
}

std::string to_string(Layout layout) {
  switch (layout) {
    case Layout::channel: return "channel";
    case Layout::flatten: return "flatten";
    case Layout::channel_into: return "channel-into";
  }
  return "?";
}

SpatialTMatrix image_to_tvector(const RealArray& image, Layout layout, const LiftConfig& cfg) {
  const ImageDims d = image_dims_of(image.dims);
  if (layout == Layout::channel && cfg.repetitions != 0)
    throw DimensionError("the channel layout does not lift; use channel-into");
  ComplexArray lifted = lift_k(to_planes(image), cfg);  // (window..., C, H, W)
  const std::size_t nwin = lifted.order() - 3;
  std::vector<std::size_t> win(lifted.dims.begin(), lifted.dims.begin() + nwin);

  if (layout == Layout::flatten) {
    // Reorder each window position's (C, H, W) block to (H, W, C).
    const std::size_t block = d.c * d.h * d.w;
    const std::size_t kk = lifted.size() / block;
    std::vector<cplx> v(lifted.size());
    for (std::size_t k = 0; k < kk; ++k)
      for (std::size_t ch = 0; ch < d.c; ++ch)
        for (std::size_t px = 0; px < d.h * d.w; ++px)
          v[k * block + px * d.c + ch] = lifted.data[k * block + ch * d.h * d.w + px];
    return {TShape(std::move(win)), block, 1, std::move(v)};
  }
  win.push_back(d.c);
  return {TShape(std::move(win)), d.h * d.w, 1, std::move(lifted.data)};
}

RealArray tvector_to_image(const SpatialTMatrix& tv, Layout layout,
                           const std::vector<std::size_t>& image_dims) {
  const ImageDims d = image_dims_of(image_dims);
  const std::size_t n = d.h * d.w * d.c;
  RealArray img(image_dims);
  if (tv.values.size() < n || tv.cols != 1) throw ShapeError("t-vector does not match the image size");
  if (layout == Layout::flatten) {
    if (tv.rows != n) throw ShapeError("t-vector length does not match the image size");
    // The inception entries form the first block in row-major order.
    for (std::size_t i = 0; i < n; ++i) img.data[i] = tv.values[i].real();
    return img;
  }
  if (tv.rows != d.h * d.w || tv.shape.order() == 0 || tv.shape.dims().back() != d.c)
    throw ShapeError("t-vector does not match the image size");
  for (std::size_t ch = 0; ch < d.c; ++ch)
    for (std::size_t px = 0; px < d.h * d.w; ++px)
      img.data[px * d.c + ch] = tv.values[ch * d.h * d.w + px].real();
  return img;
}

SpatialTMatrix image_to_tmatrix(const RealArray& image, const LiftConfig& cfg) {
  const ImageDims d = image_dims_of(image.dims);
  ComplexArray lifted = lift_k(to_planes(image), cfg);  // (window..., C, H, W)
  std::size_t nmodes = lifted.order() - 2;
  if (d.c == 1) --nmodes;
  std::vector<std::size_t> modes(lifted.dims.begin(), lifted.dims.begin() + nmodes);
  return {TShape(std::move(modes)), d.h, d.w, std::move(lifted.data)};
}

RealArray tmatrix_to_image(const SpatialTMatrix& tm, const std::vector<std::size_t>& image_dims) {
  const ImageDims d = image_dims_of(image_dims);
  if (tm.rows != d.h || tm.cols != d.w) throw ShapeError("t-matrix does not match the image size");
  const std::size_t cdim = d.c == 1 ? 1 : (tm.shape.order() ? tm.shape.dims().back() : 1);
  if (cdim != d.c) throw ShapeError("t-matrix channel mode does not match the image");
  RealArray img(image_dims);
  for (std::size_t ch = 0; ch < d.c; ++ch)
    for (std::size_t px = 0; px < d.h * d.w; ++px)
      img.data[px * d.c + ch] = tm.values[ch * d.h * d.w + px].real();
  return img;
}

}  // namespace talg
