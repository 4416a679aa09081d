#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "kio/micronet/training.hpp"

namespace kio::nn {

namespace {

constexpr char kMagic[4] = {'K', 'I', 'O', '1'};

std::uint32_t little(std::uint32_t x) {
  if constexpr (std::endian::native == std::endian::little) {
    return x;
  } else {
    return ((x & 0xFFu) << 24) | ((x & 0xFF00u) << 8) | ((x >> 8) & 0xFF00u) | (x >> 24);
  }
}

void put_u32(std::ostream& out, std::uint32_t v) {
  v = little(v);
  out.write(reinterpret_cast<const char*>(&v), 4);
}

class Reader {
 public:
  Reader(std::istream& in, std::string path) : in_(in), path_(std::move(path)) {}

  std::uint32_t u32(const char* what) {
    std::uint32_t v = 0;
    bytes(&v, 4, what);
    return little(v);
  }
  void bytes(void* dst, std::size_t n, const char* what) {
    if (!in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(n))) {
      throw std::runtime_error("truncated checkpoint " + path_ + " while reading " + what);
    }
  }

 private:
  std::istream& in_;
  std::string path_;
};

}  // namespace

void save_checkpoint(PolicyNet& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  const ParamList params = net.parameters();
  out.write(kMagic, 4);
  put_u32(out, kCheckpointVersion);
  put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    put_u32(out, static_cast<std::uint32_t>(p.name.size()));
    out.write(p.name.data(), static_cast<std::streamsize>(p.name.size()));
    put_u32(out, static_cast<std::uint32_t>(p.tensor->rank()));
    for (int d : p.tensor->shape()) put_u32(out, static_cast<std::uint32_t>(d));
    for (double v : p.tensor->values()) {
      put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
    }
  }
  if (!out) throw std::runtime_error("short write to checkpoint " + path);
}

void load_checkpoint(PolicyNet& net, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  Reader r(in, path);
  char magic[4];
  r.bytes(magic, 4, "magic");
  if (std::memcmp(magic, kMagic, 4) != 0) {
    throw std::runtime_error("bad checkpoint magic '" + std::string(magic, 4) +
                             "' (expected 'KIO1') in " + path);
  }
  const std::uint32_t version = r.u32("version");
  if (version != kCheckpointVersion) {
    throw std::runtime_error("unsupported checkpoint version " + std::to_string(version));
  }
  ParamList params = net.parameters();
  const std::uint32_t count = r.u32("tensor count");
  if (count != params.size()) {
    throw std::runtime_error("checkpoint has " + std::to_string(count) + " tensors, network has " +
                             std::to_string(params.size()));
  }
  for (auto& p : params) {
    const std::uint32_t name_len = r.u32("name length");
    if (name_len > 4096) throw std::runtime_error("corrupt tensor name length in " + path);
    std::string name(name_len, '\0');
    r.bytes(name.data(), name_len, "tensor name");
    if (name != p.name) {
      throw std::runtime_error("checkpoint tensor '" + name + "' where '" + p.name + "' expected");
    }
    const std::uint32_t rank = r.u32("rank");
    std::vector<int> shape(rank);
    for (auto& d : shape) d = static_cast<int>(r.u32("dims"));
    if (shape != p.tensor->shape()) {
      throw std::runtime_error("shape mismatch for tensor '" + name + "'");
    }
    for (auto& v : p.tensor->values()) v = std::bit_cast<float>(r.u32("tensor payload"));
  }
}

PolicyNet load_checkpoint(const std::string& path, const PolicyNetConfig& config) {
  PolicyNet net(config);
  load_checkpoint(net, path);
  return net;
}

}  // namespace kio::nn
