#include "rhhh/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace rhhh {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

// Each generator gets its own salt so that equal user seeds stay independent.
std::mt19937_64 salted(uint64_t seed, uint32_t salt) {
  std::seed_seq seq{static_cast<uint32_t>(seed), static_cast<uint32_t>(seed >> 32), salt};
  return std::mt19937_64(seq);
}

double unit_interval(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace

std::optional<uint32_t> parse_ipv4(std::string_view text) {
  uint32_t addr = 0;
  for (int octet = 0; octet < 4; ++octet) {
    if (octet > 0) {
      if (text.empty() || text.front() != '.') return std::nullopt;
      text.remove_prefix(1);
    }
    if (text.empty() || text.front() < '0' || text.front() > '9') return std::nullopt;
    unsigned value = 0;
    auto [ptr, ec] = std::from_chars(text.data(), text.data() + std::min<size_t>(text.size(), 3), value);
    if (ec != std::errc() || value > 255) return std::nullopt;
    const auto used = static_cast<size_t>(ptr - text.data());
    if (used < text.size() && text[used] >= '0' && text[used] <= '9') return std::nullopt;
    text.remove_prefix(used);
    addr = (addr << 8) | value;
  }
  if (!text.empty()) return std::nullopt;
  return addr;
}

CsvReader::CsvReader(const std::string& path) : in_(path), path_(path) {
  if (!in_) throw TraceError("cannot open trace file '" + path + "'");
}

bool CsvReader::next(PacketRecord& out) {
  while (std::getline(in_, line_)) {
    ++line_no_;
    const std::string_view line = trim(line_);
    if (line.empty()) continue;
    const size_t comma = line.find(',');
    const auto src = parse_ipv4(trim(line.substr(0, comma)));
    std::optional<uint32_t> dst = 0u;
    if (comma != std::string_view::npos) dst = parse_ipv4(trim(line.substr(comma + 1)));
    if (!src || !dst) {
      throw TraceError(path_ + ":" + std::to_string(line_no_) + ": malformed record '" + std::string(line) + "'");
    }
    out = PacketRecord{*src, *dst};
    return true;
  }
  if (in_.bad()) throw TraceError("read error on '" + path_ + "'");
  return false;
}

BinaryReader::BinaryReader(const std::string& path) : in_(path, std::ios::binary), path_(path) {
  if (!in_) throw TraceError("cannot open trace file '" + path + "'");
}

bool BinaryReader::next(PacketRecord& out) {
  unsigned char buf[8];
  in_.read(reinterpret_cast<char*>(buf), sizeof buf);
  const auto got = in_.gcount();
  if (got == 0) {
    if (in_.bad()) throw TraceError("read error on '" + path_ + "'");
    return false;
  }
  if (got != 8) {
    throw TraceError(path_ + ": truncated record " + std::to_string(record_) + " (" + std::to_string(got) +
                     " of 8 bytes)");
  }
  ++record_;
  auto be32 = [](const unsigned char* p) {
    return (uint32_t{p[0]} << 24) | (uint32_t{p[1]} << 16) | (uint32_t{p[2]} << 8) | uint32_t{p[3]};
  };
  out = PacketRecord{be32(buf), be32(buf + 4)};
  return true;
}

ZipfStream::ZipfStream(const SyntheticSpec& spec) : spec_(spec), rng_(salted(spec.seed, 0x7A697066u)) {
  if (spec.flows == 0) throw std::invalid_argument("zipf spec needs at least one flow");
  if (!(spec.zipf_s >= 0)) throw std::invalid_argument("zipf exponent must be non-negative");

  cdf_.resize(spec.flows);
  double acc = 0;
  for (uint64_t i = 0; i < spec.flows; ++i) {
    acc += std::pow(static_cast<double>(i + 1), -spec.zipf_s);
    cdf_[i] = acc;
  }
  for (double& c : cdf_) c /= acc;
  cdf_.back() = 1.0;

  // Per-octet permutations make the tree branches land on scattered values.
  std::mt19937_64 tree_rng = salted(spec.seed, 0x74726565u);
  auto perm = [&] {
    std::vector<uint32_t> p(256);
    std::iota(p.begin(), p.end(), 0u);
    for (size_t i = 255; i > 0; --i) std::swap(p[i], p[tree_rng() % (i + 1)]);
    return p;
  };
  std::vector<uint32_t> perms[8];
  for (auto& p : perms) p = perm();
  static constexpr uint32_t fanout[4] = {4, 8, 16, 256};
  auto address = [&](int dim) {
    uint32_t a = 0;
    for (int o = 0; o < 4; ++o) a = (a << 8) | perms[dim * 4 + o][tree_rng() % fanout[o]];
    return a;
  };
  flow_keys_.reserve(spec.flows);
  for (uint64_t i = 0; i < spec.flows; ++i) {
    const uint32_t src = address(0);
    flow_keys_.push_back({src, address(1)});
  }
}

uint64_t ZipfStream::next_flow() {
  const double u = unit_interval(rng_);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return std::min<uint64_t>(static_cast<uint64_t>(it - cdf_.begin()), spec_.flows - 1);
}

bool ZipfStream::next(PacketRecord& out) {
  if (emitted_ >= spec_.packets) return false;
  ++emitted_;
  out = flow_keys_[next_flow()];
  return true;
}

std::vector<PacketRecord> materialize(RecordSource& source, uint64_t limit) {
  std::vector<PacketRecord> out;
  PacketRecord rec;
  while (out.size() < limit && source.next(rec)) out.push_back(rec);
  return out;
}

void write_csv(const std::string& path, std::span<const PacketRecord> records, bool with_dst) {
  std::ofstream out(path);
  if (!out) throw TraceError("cannot create '" + path + "'");
  for (const auto& r : records) {
    out << format_ipv4(r.src);
    if (with_dst) out << ',' << format_ipv4(r.dst);
    out << '\n';
  }
  if (!out) throw TraceError("write error on '" + path + "'");
}

void write_binary(const std::string& path, std::span<const PacketRecord> records) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw TraceError("cannot create '" + path + "'");
  for (const auto& r : records) {
    const unsigned char buf[8] = {
        static_cast<unsigned char>(r.src >> 24), static_cast<unsigned char>(r.src >> 16),
        static_cast<unsigned char>(r.src >> 8),  static_cast<unsigned char>(r.src),
        static_cast<unsigned char>(r.dst >> 24), static_cast<unsigned char>(r.dst >> 16),
        static_cast<unsigned char>(r.dst >> 8),  static_cast<unsigned char>(r.dst)};
    out.write(reinterpret_cast<const char*>(buf), sizeof buf);
  }
  if (!out) throw TraceError("write error on '" + path + "'");
}

}  // namespace rhhh
