#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rhhh/hierarchy.hpp"

namespace rhhh {

using PacketRecord = PacketKey;

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::optional<uint32_t> parse_ipv4(std::string_view text);

// Single-pass record stream.
class RecordSource {
 public:
  virtual ~RecordSource() = default;
  virtual bool next(PacketRecord& out) = 0;
};

// Lines "src_ip,dst_ip" or "src_ip". Blank lines are skipped; anything else
// that fails to parse raises TraceError naming the line.
class CsvReader final : public RecordSource {
 public:
  explicit CsvReader(const std::string& path);
  bool next(PacketRecord& out) override;

 private:
  std::ifstream in_;
  std::string path_;
  std::string line_;
  uint64_t line_no_ = 0;
};

// 8-byte records: big-endian src then big-endian dst.
class BinaryReader final : public RecordSource {
 public:
  explicit BinaryReader(const std::string& path);
  bool next(PacketRecord& out) override;

 private:
  std::ifstream in_;
  std::string path_;
  uint64_t record_ = 0;
};

struct SyntheticSpec {
  uint64_t flows = 1;
  double zipf_s = 1.0;
  uint64_t packets = 0;
  uint64_t seed = 0;
};

/// Zipf-distributed flows. Flow i in [1, flows] is drawn with probability
/// proportional to i^-s. Flow addresses hang off a seeded random prefix tree
/// (4 first octets, 8 second, 16 third, 256 fourth per dimension) so that
/// aggregates form at every byte level.
class ZipfStream final : public RecordSource {
 public:
  explicit ZipfStream(const SyntheticSpec& spec);
  bool next(PacketRecord& out) override;

  // Index in [0, flows) of the next draw; advances the stream.
  uint64_t next_flow();
  const std::vector<PacketRecord>& flow_table() const { return flow_keys_; }

 private:
  SyntheticSpec spec_;
  std::mt19937_64 rng_;
  std::vector<double> cdf_;
  std::vector<PacketRecord> flow_keys_;
  uint64_t emitted_ = 0;
};

std::vector<PacketRecord> materialize(RecordSource& source, uint64_t limit = UINT64_MAX);

void write_csv(const std::string& path, std::span<const PacketRecord> records, bool with_dst = true);
void write_binary(const std::string& path, std::span<const PacketRecord> records);

}  // namespace rhhh
