#include "graphpae/checkpoint.hpp"

#include "binary_io.hpp"
#include "graphpae/errors.hpp"

namespace graphpae {

void write_checkpoint(const std::filesystem::path& path, const NamedTensors& entries) {
  detail::ByteWriter w;
  w.bytes("PAEW");
  w.u16(kCheckpointVersion);
  w.u64(entries.size());
  for (const auto& [name, tensor] : entries) {
    w.u32(static_cast<std::uint32_t>(name.size()));
    w.bytes(name);
    w.u64(tensor.rank());
    for (std::size_t d : tensor.shape()) w.u64(d);
    for (double v : tensor.values()) w.f64(v);
  }
  w.save(path);
}

NamedTensors read_checkpoint(const std::filesystem::path& path) {
  auto r = detail::ByteReader::from_file(path);
  r.expect_magic("PAEW");
  const std::uint16_t version = r.u16();
  if (version != kCheckpointVersion) {
    throw FormatError("'" + path.string() + "': checkpoint version " + std::to_string(version) +
                      " unsupported (expected " + std::to_string(kCheckpointVersion) + ")");
  }
  const std::uint64_t count = r.u64();
  r.require_elements(count, 4 + 8);
  NamedTensors entries;
  entries.reserve(count);
  for (std::uint64_t e = 0; e < count; ++e) {
    const std::uint32_t len = r.u32();
    std::string name = r.bytes(len);
    const std::uint64_t rank = r.u64();
    r.require_elements(rank, 8);
    std::vector<std::size_t> shape(rank);
    std::uint64_t total = 1;
    for (auto& d : shape) {
      d = r.u64();
      total *= d;
    }
    r.require_elements(total, 8);
    std::vector<double> values(total);
    for (auto& v : values) v = r.f64();
    entries.emplace_back(std::move(name), Tensor(std::move(shape), std::move(values)));
  }
  if (!r.at_end()) throw FormatError("'" + path.string() + "': trailing bytes after checkpoint");
  return entries;
}

}  // namespace graphpae
