#include "pcarf/text_io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>

#include "pcarf/errors.hpp"

namespace pcarf {

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

void write_values(std::ostream& out, std::string_view tag, std::span<const double> values) {
  out << tag;
  for (double v : values) out << ' ' << format_double(v);
  out << '\n';
}

std::string TokenReader::next() {
  std::string token;
  if (!(in_ >> token)) {
    throw DataError("model file: unexpected end of input after token " + std::to_string(position_));
  }
  ++position_;
  return token;
}

void TokenReader::expect(std::string_view token) {
  const std::string got = next();
  if (got != token) {
    throw DataError("model file: token " + std::to_string(position_) + ": expected '" +
                    std::string(token) + "', found '" + got + "'");
  }
}

long long TokenReader::next_int() {
  const std::string token = next();
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw DataError("model file: token " + std::to_string(position_) + ": '" + token +
                    "' is not an integer");
  }
  return v;
}

std::uint64_t TokenReader::next_u64() {
  const std::string token = next();
  std::uint64_t v = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw DataError("model file: token " + std::to_string(position_) + ": '" + token +
                    "' is not an unsigned integer");
  }
  return v;
}

std::size_t TokenReader::next_size() {
  const long long v = next_int();
  if (v < 0) throw DataError("model file: token " + std::to_string(position_) + " is negative");
  return static_cast<std::size_t>(v);
}

double TokenReader::next_double() {
  const std::string token = next();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc() || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw DataError("model file: token " + std::to_string(position_) + ": '" + token +
                    "' is not a finite number");
  }
  return v;
}

bool TokenReader::at_end() {
  in_ >> std::ws;
  return in_.eof();
}

std::vector<double> read_values(TokenReader& reader, std::string_view tag, std::size_t count) {
  reader.expect(tag);
  std::vector<double> out(count);
  for (auto& v : out) v = reader.next_double();
  return out;
}

}  // namespace pcarf
