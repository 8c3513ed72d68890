#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace pcarf {

// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

// "tag v0 v1 ...\n"
void write_values(std::ostream& out, std::string_view tag, std::span<const double> values);

// Whitespace-separated token stream over the model text formats. Every
// failure is a DataError carrying the token position.
class TokenReader {
 public:
  explicit TokenReader(std::istream& in) : in_(in) {}

  std::string next();
  void expect(std::string_view token);
  std::size_t next_size();
  long long next_int();
  std::uint64_t next_u64();
  double next_double();
  bool at_end();

 private:
  std::istream& in_;
  std::size_t position_ = 0;
};

std::vector<double> read_values(TokenReader& reader, std::string_view tag, std::size_t count);

}  // namespace pcarf
