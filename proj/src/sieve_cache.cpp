#include <array>
#include <bit>
#include <cstring>
#include <fstream>

#include "shortsum/arith.hpp"
#include "shortsum/errors.hpp"

namespace shortsum {

namespace {

constexpr std::array<char, 4> kMagic{'P', 'S', 'L', '1'};

static_assert(std::endian::native == std::endian::little,
              "sieve cache I/O assumes a little-endian host");

void put_u64(std::ostream& out, std::uint64_t v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void put_f64(std::ostream& out, double v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint64_t get_u64(std::istream& in) {
  std::uint64_t v = 0;
  if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) throw FormatError("truncated sieve cache");
  return v;
}

}  // namespace

void save_sieve(const SieveTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open " + path.string() + " for writing");
  out.write(kMagic.data(), kMagic.size());
  put_u64(out, table.lo());
  put_u64(out, table.hi());
  const std::uint64_t nbits = table.hi() - table.lo() + 1;
  const std::uint64_t nbytes = (nbits + 7) / 8;
  out.write(reinterpret_cast<const char*>(table.prime_words().data()),
            static_cast<std::streamsize>(nbytes));
  for (const auto& e : table.lambda_support()) {
    put_u64(out, e.n);
    put_f64(out, e.value);
  }
  if (!out) throw FormatError("write to " + path.string() + " failed");
}

SieveTable load_sieve(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open " + path.string());
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size())) throw FormatError("truncated sieve cache");
  if (std::memcmp(magic.data(), "PSL", 3) != 0) throw FormatError("not a sieve cache file");
  if (magic != kMagic) {
    throw FormatError(std::string("unsupported sieve cache version '") + magic[3] + "'");
  }

  SieveTable table;
  table.lo_ = get_u64(in);
  table.hi_ = get_u64(in);
  if (table.lo_ < 1 || table.hi_ < table.lo_) throw FormatError("invalid range in sieve cache");
  const std::uint64_t nbits = table.hi_ - table.lo_ + 1;
  const std::uint64_t nbytes = (nbits + 7) / 8;
  table.words_.assign((nbits + 63) / 64, 0);
  if (!in.read(reinterpret_cast<char*>(table.words_.data()), static_cast<std::streamsize>(nbytes))) {
    throw FormatError("truncated prime bitset in sieve cache");
  }

  std::uint64_t prev = 0;
  for (;;) {
    std::uint64_t n = 0;
    if (!in.read(reinterpret_cast<char*>(&n), sizeof n)) {
      if (in.gcount() != 0) throw FormatError("truncated lambda entry in sieve cache");
      break;
    }
    double v = 0.0;
    if (!in.read(reinterpret_cast<char*>(&v), sizeof v)) {
      throw FormatError("truncated lambda entry in sieve cache");
    }
    if (!table.contains(n) || n <= prev || !(v > 0.0)) {
      throw FormatError("corrupt lambda entry in sieve cache");
    }
    prev = n;
    table.support_.push_back({n, v});
  }
  table.index_higher_powers();
  return table;
}

}  // namespace shortsum
