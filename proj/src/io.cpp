#include "talg/io.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "talg/errors.hpp"

namespace talg {

static_assert(std::endian::native == std::endian::little, "TMX encoding assumes a little-endian host");

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out.write(bytes.data(), std::streamsize(bytes.size()));
  if (!out) throw FormatError("write failed for " + path.string());
}

std::string file_checksum(const std::filesystem::path& path) {
  const std::string bytes = read_file(path);
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

// ---- PNM ------------------------------------------------------------------

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(const std::string& b) : b_(b) {}

  void skip_space_and_comments() {
    while (pos_ < b_.size()) {
      if (std::isspace(static_cast<unsigned char>(b_[pos_]))) {
        ++pos_;
      } else if (b_[pos_] == '#') {
        while (pos_ < b_.size() && b_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::size_t number() {
    skip_space_and_comments();
    std::size_t start = pos_;
    std::size_t v = 0;
    while (pos_ < b_.size() && std::isdigit(static_cast<unsigned char>(b_[pos_]))) {
      v = v * 10 + std::size_t(b_[pos_] - '0');
      if (v > (1u << 30)) throw FormatError("PNM header value too large");
      ++pos_;
    }
    if (pos_ == start) throw FormatError("malformed PNM header");
    return v;
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }

 private:
  const std::string& b_;
  std::size_t pos_ = 2;
};

}  // namespace

RealArray parse_pnm(const std::string& bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6'))
    throw FormatError("not a binary PGM/PPM file (expected P5 or P6)");
  const std::size_t channels = bytes[1] == '6' ? 3 : 1;
  HeaderReader h(bytes);
  const std::size_t width = h.number();
  const std::size_t height = h.number();
  const std::size_t maxval = h.number();
  if (width == 0 || height == 0) throw FormatError("PNM image has zero size");
  if (maxval != 255) throw FormatError("only PNM maxval 255 is supported");
  if (h.pos() >= bytes.size() || !std::isspace(static_cast<unsigned char>(bytes[h.pos()])))
    throw FormatError("malformed PNM header");
  h.advance();
  const std::size_t n = width * height * channels;
  if (bytes.size() - h.pos() < n) throw FormatError("truncated PNM payload");
  std::vector<std::size_t> dims{height, width};
  if (channels == 3) dims.push_back(3);
  RealArray img(std::move(dims));
  for (std::size_t i = 0; i < n; ++i)
    img.data[i] = static_cast<unsigned char>(bytes[h.pos() + i]);
  return img;
}

RealArray read_pnm(const std::filesystem::path& path) { return parse_pnm(read_file(path)); }

std::string encode_pnm(const RealArray& image) {
  const bool color = image.order() == 3;
  if (!(image.order() == 2 || (color && image.dims[2] == 3)))
    throw ShapeError("PNM output needs dims (H, W) or (H, W, 3)");
  std::ostringstream os;
  os << (color ? "P6" : "P5") << '\n' << image.dims[1] << ' ' << image.dims[0] << "\n255\n";
  std::string out = os.str();
  out.reserve(out.size() + image.size());
  for (double v : image.data) {
    const double c = std::clamp(std::round(v), 0.0, 255.0);
    out.push_back(static_cast<char>(static_cast<unsigned char>(c)));
  }
  return out;
}

void write_pnm(const RealArray& image, const std::filesystem::path& path) {
  write_file(path, encode_pnm(image));
}

// ---- CIFAR ----------------------------------------------------------------

std::vector<CifarRecord> parse_cifar_batch(const std::string& bytes) {
  constexpr std::size_t record = 3073;
  constexpr std::size_t plane = 1024;
  if (bytes.empty() || bytes.size() % record != 0)
    throw FormatError("CIFAR batch size " + std::to_string(bytes.size()) +
                      " is not a multiple of 3073 bytes");
  std::vector<CifarRecord> out(bytes.size() / record);
  for (std::size_t r = 0; r < out.size(); ++r) {
    const auto* p = reinterpret_cast<const unsigned char*>(bytes.data() + r * record);
    out[r].label = p[0];
    out[r].image = RealArray({32, 32, 3});
    for (std::size_t ch = 0; ch < 3; ++ch)
      for (std::size_t px = 0; px < plane; ++px)
        out[r].image.data[px * 3 + ch] = p[1 + ch * plane + px];
  }
  return out;
}

std::vector<CifarRecord> read_cifar_batch(const std::filesystem::path& path) {
  return parse_cifar_batch(read_file(path));
}

// ---- TMX ------------------------------------------------------------------

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint32_t get_u32(const std::string& b, std::size_t& pos) {
  if (b.size() - pos < 4) throw FormatError("truncated TMX header");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= std::uint32_t(static_cast<unsigned char>(b[pos + i])) << (8 * i);
  pos += 4;
  return v;
}

}  // namespace

std::string encode_tmx(const SpatialTMatrix& a) {
  if (a.values.size() != a.shape.size() * a.rows * a.cols)
    throw DimensionError("array length does not match its declared size");
  if (a.shape.order() > 255) throw DimensionError("TMX supports at most 255 t-scalar modes");
  std::string out = "TMX1";
  out.push_back(static_cast<char>(a.shape.order()));
  for (std::size_t d : a.shape.dims()) put_u32(out, static_cast<std::uint32_t>(d));
  put_u32(out, static_cast<std::uint32_t>(a.rows));
  put_u32(out, static_cast<std::uint32_t>(a.cols));
  const std::size_t header = out.size();
  out.resize(header + a.values.size() * 16);
  std::memcpy(out.data() + header, a.values.data(), a.values.size() * 16);
  return out;
}

SpatialTMatrix parse_tmx(const std::string& bytes) {
  if (bytes.size() < 5 || bytes.compare(0, 4, "TMX1") != 0) throw FormatError("not a TMX1 file");
  std::size_t pos = 4;
  const std::size_t n = static_cast<unsigned char>(bytes[pos++]);
  std::vector<std::size_t> dims(n);
  for (auto& d : dims) {
    d = get_u32(bytes, pos);
    if (d == 0) throw FormatError("TMX mode size is zero");
  }
  SpatialTMatrix a;
  a.shape = TShape(std::move(dims));
  a.rows = get_u32(bytes, pos);
  a.cols = get_u32(bytes, pos);
  const std::size_t count = a.shape.size() * a.rows * a.cols;
  if (bytes.size() - pos != count * 16)
    throw FormatError("TMX payload has " + std::to_string(bytes.size() - pos) + " bytes, expected " +
                      std::to_string(count * 16));
  a.values.resize(count);
  std::memcpy(a.values.data(), bytes.data() + pos, count * 16);
  return a;
}

SpatialTMatrix read_tmx(const std::filesystem::path& path) { return parse_tmx(read_file(path)); }

void write_tmx(const SpatialTMatrix& a, const std::filesystem::path& path) {
  write_file(path, encode_tmx(a));
}

}  // namespace talg
