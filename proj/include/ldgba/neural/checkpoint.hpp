#pragma once

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "ldgba/neural/qnet.hpp"

namespace ldgba::neural {

class CheckpointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Layout, all integers and doubles little-endian:
//   8 bytes magic "LDGQNET\0", u32 version, u32 architecture,
//   u64 obs_vocab, task_vocab, obs_hidden, task_hidden, actions, width, obs_len, task_len,
//   u64 parameter count, then every parameter array in parameters() order.
inline constexpr std::array<char, 8> kCheckpointMagic = {'L', 'D', 'G', 'Q', 'N', 'E', 'T', '\0'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

namespace detail {

template <class T>
void put(std::string& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

template <class T>
T get(const std::string& in, std::size_t& pos) {
  if (pos + sizeof(T) > in.size()) throw CheckpointError("checkpoint truncated at byte " + std::to_string(pos));
  unsigned char b[sizeof(T)];
  std::memcpy(b, in.data() + pos, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  pos += sizeof(T);
  T v;
  std::memcpy(&v, b, sizeof(T));
  return v;
}

}  // namespace detail

inline std::string serialize(QNet net) {
  std::string out(kCheckpointMagic.begin(), kCheckpointMagic.end());
  const QNetShape& s = net.shape();
  detail::put<std::uint32_t>(out, kCheckpointVersion);
  detail::put<std::uint32_t>(out, static_cast<std::uint32_t>(s.arch));
  for (std::size_t v : {s.obs_vocab, s.task_vocab, s.obs_hidden, s.task_hidden, s.actions, s.width, s.obs_len, s.task_len})
    detail::put<std::uint64_t>(out, v);
  detail::put<std::uint64_t>(out, net.parameter_count());
  for (auto& p : net.parameters())
    for (double x : *p.values) detail::put<double>(out, x);
  return out;
}

inline QNet deserialize(const std::string& in) {
  if (in.size() < kCheckpointMagic.size() || !std::equal(kCheckpointMagic.begin(), kCheckpointMagic.end(), in.begin()))
    throw CheckpointError("not a network checkpoint (bad magic)");
  std::size_t pos = kCheckpointMagic.size();
  const auto version = detail::get<std::uint32_t>(in, pos);
  if (version != kCheckpointVersion) throw CheckpointError("unsupported checkpoint version " + std::to_string(version));
  QNetShape s;
  const auto arch = detail::get<std::uint32_t>(in, pos);
  if (arch != 1 && arch != 2) throw CheckpointError("unknown architecture " + std::to_string(arch));
  s.arch = static_cast<Architecture>(arch);
  for (std::size_t* f : {&s.obs_vocab, &s.task_vocab, &s.obs_hidden, &s.task_hidden, &s.actions, &s.width, &s.obs_len,
                         &s.task_len}) {
    const auto v = detail::get<std::uint64_t>(in, pos);
    if (v == 0 || v > (1u << 20)) throw CheckpointError("implausible dimension " + std::to_string(v));
    *f = static_cast<std::size_t>(v);
  }
  QNet net(s);
  const auto count = detail::get<std::uint64_t>(in, pos);
  if (count != net.parameter_count())
    throw CheckpointError("parameter count " + std::to_string(count) + " does not match the shape (" +
                          std::to_string(net.parameter_count()) + ")");
  for (auto& p : net.parameters())
    for (double& x : *p.values) x = detail::get<double>(in, pos);
  if (pos != in.size()) throw CheckpointError("trailing bytes after checkpoint");
  return net;
}

inline void save_checkpoint(const QNet& net, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CheckpointError("cannot write " + path);
  const std::string bytes = serialize(net);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw CheckpointError("write failed: " + path);
}

inline QNet load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CheckpointError("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str());
}

}  // namespace ldgba::neural
