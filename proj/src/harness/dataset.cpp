#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "kio/harness.hpp"
#include "kio/render.hpp"
#include "kio/rng.hpp"

namespace kio {

namespace {

constexpr char kDatasetMagic[4] = {'K', 'I', 'O', 'D'};
constexpr std::uint32_t kDatasetVersion = 1;
constexpr int kPoseAttempts = 100000;
constexpr double kGoalMin = 3.0;
constexpr double kGoalMax = 8.0;
constexpr double kHeadingSpread = std::numbers::pi / 4.0;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}
void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
}
void put_f64(std::string& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class ByteReader {
 public:
  explicit ByteReader(const std::string& s) : s_(s) {}
  std::uint64_t uint(int bytes) {
    if (pos_ + bytes > s_.size()) throw std::runtime_error("truncated dataset");
    std::uint64_t v = 0;
    for (int i = 0; i < bytes; ++i) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(s_[pos_ + i])) << (8 * i);
    }
    pos_ += bytes;
    return v;
  }
  double f64() { return std::bit_cast<double>(uint(8)); }
  float f32() { return std::bit_cast<float>(static_cast<std::uint32_t>(uint(4))); }
  bool done() const { return pos_ == s_.size(); }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

void DatasetConfig::validate() const {
  if (world_seeds.empty() || frames_per_world < 1) {
    throw std::invalid_argument("dataset needs at least one world and one frame per world");
  }
  world.validate();
}

Dataset generate_dataset(const DatasetConfig& config) {
  config.validate();
  Dataset out;
  out.reserve(config.world_seeds.size() * config.frames_per_world);
  for (std::uint64_t seed : config.world_seeds) {
    const World world = generate_world(config.world, seed);
    Rng rng(derive_seed(seed, 0xDA7A));
    const Vec3& e = world.extent();
    for (int f = 0; f < config.frames_per_world; ++f) {
      KinodynamicState s;
      int attempt = 0;
      do {
        if (++attempt > kPoseAttempts) throw std::runtime_error("no collision-free dataset pose");
        s.p = Vec3(rng.uniform(2.0, e.x() - 2.0), rng.uniform(2.0, e.y() - 2.0),
                   rng.uniform(1.5, std::min(4.0, e.z())));
      } while (world.signed_distance(s.p) < config.radius);
      s.yaw = rng.uniform(-std::numbers::pi, std::numbers::pi);
      const Mat3 r = yaw_rotation(s.yaw);
      // Mostly forward flight with some sideslip.
      const double heading = 0.3 * rng.normal();
      const double speed = rng.uniform(0.0, config.max_speed);
      s.v = r * Vec3(std::cos(heading), std::sin(heading), 0.1 * rng.normal()) * speed;
      s.a = r * Vec3(0.5 * rng.normal(), 0.5 * rng.normal(), 0.1 * rng.normal());

      const double dist = rng.uniform(kGoalMin, kGoalMax);
      const double az = rng.uniform(-kHeadingSpread, kHeadingSpread);
      const Vec3 goal = s.p + r * Vec3(dist * std::cos(az), dist * std::sin(az), rng.uniform(-0.5, 0.5));

      DepthImage image = render_depth(world, BodyPose::from_yaw(s.p, s.yaw), config.camera.intrinsics,
                                      config.camera.extrinsics, config.max_range);
      out.push_back({std::move(image), s, goal});
    }
  }
  return out;
}

std::string serialize_dataset(const Dataset& data) {
  std::string out(kDatasetMagic, 4);
  put_u32(out, kDatasetVersion);
  put_u32(out, static_cast<std::uint32_t>(data.size()));
  for (const auto& d : data) {
    put_u32(out, static_cast<std::uint32_t>(d.image.width()));
    put_u32(out, static_cast<std::uint32_t>(d.image.height()));
    put_f64(out, d.image.max_range());
    for (const Vec3* v : {&d.state.p, &d.state.v, &d.state.a}) {
      for (int i = 0; i < 3; ++i) put_f64(out, (*v)[i]);
    }
    put_f64(out, d.state.yaw);
    for (int i = 0; i < 3; ++i) put_f64(out, d.goal[i]);
    for (float x : d.image.values()) put_u32(out, std::bit_cast<std::uint32_t>(x));
  }
  return out;
}

Dataset deserialize_dataset(const std::string& bytes) {
  if (bytes.size() < 4 || bytes.compare(0, 4, kDatasetMagic, 4) != 0) {
    throw std::runtime_error("not a KIOD dataset");
  }
  ByteReader r(bytes);
  r.uint(4);
  if (r.uint(4) != kDatasetVersion) throw std::runtime_error("unsupported dataset version");
  const auto count = r.uint(4);
  Dataset out;
  for (std::uint64_t k = 0; k < count; ++k) {
    const int w = static_cast<int>(r.uint(4));
    const int h = static_cast<int>(r.uint(4));
    const double range = r.f64();
    nn::TrainingSample s{DepthImage(w, h, range), {}, Vec3::Zero()};
    for (Vec3* v : {&s.state.p, &s.state.v, &s.state.a}) {
      for (int i = 0; i < 3; ++i) (*v)[i] = r.f64();
    }
    s.state.yaw = r.f64();
    for (int i = 0; i < 3; ++i) s.goal[i] = r.f64();
    for (auto& x : s.image.values()) x = r.f32();
    out.push_back(std::move(s));
  }
  if (!r.done()) throw std::runtime_error("trailing bytes after dataset");
  return out;
}

void save_dataset(const Dataset& data, const std::string& path) {
  write_file(path, serialize_dataset(data));
}

Dataset load_dataset(const std::string& path) { return deserialize_dataset(read_file(path)); }

std::vector<LossBreakdown> train_policy(nn::PolicyNet& net, const Dataset& data,
                                        const TrainConfig& config) {
  if (data.empty()) throw std::invalid_argument("empty training set");
  if (config.steps < 1 || config.batch_size < 1) {
    throw std::invalid_argument("training needs steps >= 1 and batch_size >= 1");
  }
  nn::Adam adam(config.learning_rate);
  Rng rng(config.seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), 0);
  std::size_t cursor = order.size();
  std::vector<LossBreakdown> curve;
  curve.reserve(config.steps);
  for (int step = 0; step < config.steps; ++step) {
    std::vector<nn::TrainingSample> batch;
    for (int b = 0; b < config.batch_size; ++b) {
      if (cursor == order.size()) {
        // Fisher-Yates with the portable generator, so the batch order is platform independent.
        for (std::size_t i = order.size() - 1; i > 0; --i) {
          std::swap(order[i], order[rng.uniform_int(0, static_cast<int>(i))]);
        }
        cursor = 0;
      }
      batch.push_back(data[order[cursor++]]);
    }
    curve.push_back(nn::train_step(batch, net, adam, config.context));
  }
  return curve;
}

std::string loss_curve_csv(const std::vector<LossBreakdown>& curve) {
  std::ostringstream out;
  out.precision(17);
  out << "step,total,smooth,safety,guidance\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const auto& l = curve[i];
    out << i + 1 << ',' << l.total << ',' << l.smooth << ',' << l.safety << ',' << l.guidance << '\n';
  }
  return out.str();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << contents;
  if (!out) throw std::runtime_error("short write to " + path);
}

}  // namespace kio
