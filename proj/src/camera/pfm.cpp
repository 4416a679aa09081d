#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "kio/camera.hpp"

namespace kio {

namespace {

std::uint32_t to_little(std::uint32_t x) {
  if constexpr (std::endian::native == std::endian::little) {
    return x;
  } else {
    return ((x & 0xFFu) << 24) | ((x & 0xFF00u) << 8) | ((x >> 8) & 0xFF00u) | (x >> 24);
  }
}

nlohmann::ordered_json mat_json(const Mat3& m) {
  auto out = nlohmann::ordered_json::array();
  for (int r = 0; r < 3; ++r) out.push_back({m(r, 0), m(r, 1), m(r, 2)});
  return out;
}

}  // namespace

void write_pfm(const DepthImage& image, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "Pf\n" << image.width() << " " << image.height() << "\n-1.0\n";
  for (int v = image.height() - 1; v >= 0; --v) {
    for (int u = 0; u < image.width(); ++u) {
      const std::uint32_t bits = to_little(std::bit_cast<std::uint32_t>(image.at(u, v)));
      out.write(reinterpret_cast<const char*>(&bits), sizeof bits);
    }
  }
  if (!out) throw std::runtime_error("short write to " + path);
}

DepthImage read_pfm(const std::string& path, double max_range) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string magic;
  int width = 0;
  int height = 0;
  double scale = 0.0;
  in >> magic >> width >> height >> scale;
  in.get();
  if (magic != "Pf") throw std::runtime_error("not a single-channel PFM: magic '" + magic + "'");
  if (scale >= 0.0) throw std::runtime_error("big-endian PFM is not supported");
  DepthImage image(width, height, max_range);
  for (int v = height - 1; v >= 0; --v) {
    for (int u = 0; u < width; ++u) {
      std::uint32_t bits = 0;
      if (!in.read(reinterpret_cast<char*>(&bits), sizeof bits)) {
        throw std::runtime_error("truncated PFM payload in " + path);
      }
      image.at(u, v) = std::bit_cast<float>(to_little(bits));
    }
  }
  return image;
}

std::string depth_sidecar_json(const Intrinsics& intr, const BodyPose& pose,
                               const CameraExtrinsics& extr, double max_range) {
  nlohmann::ordered_json j;
  j["intrinsics"] = {{"fx", intr.fx}, {"fy", intr.fy}, {"cx", intr.cx},
                     {"cy", intr.cy}, {"width", intr.width}, {"height", intr.height}};
  j["pose"] = {{"rotation", mat_json(pose.rotation)},
               {"translation", {pose.translation.x(), pose.translation.y(), pose.translation.z()}}};
  j["extrinsics"] = {
      {"rotation", mat_json(extr.rotation)},
      {"translation", {extr.translation.x(), extr.translation.y(), extr.translation.z()}}};
  j["max_range"] = max_range;
  return j.dump(2) + "\n";
}

}  // namespace kio
