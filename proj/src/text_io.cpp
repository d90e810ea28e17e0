#include "annpso/text_io.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "annpso/error.hpp"

namespace annpso::text {

std::string format_double(double value) {
  std::array<char, 32> buf{};
  auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
  return std::string(buf.data(), ptr);
}

bool parse_double(std::string_view token, double& value) {
  token = trim(token);
  if (token.empty()) return false;
  if (token.front() == '+') token.remove_prefix(1);
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  return ec == std::errc() && ptr == token.data() + token.size();
}

double parse_double_or_throw(std::string_view token, std::string_view context) {
  double value = 0.0;
  if (!parse_double(token, value))
    throw Error(ErrorKind::parse,
                std::string(context) + ": '" + std::string(trim(token)) + "' is not a number");
  return value;
}

std::string_view trim(std::string_view text) noexcept {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front())))
    text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back())))
    text.remove_suffix(1);
  return text;
}

std::vector<std::string_view> split(std::string_view line, char delimiter) {
  std::vector<std::string_view> parts;
  std::size_t pos = 0;
  while (true) {
    const auto end = line.find(delimiter, pos);
    if (end == std::string_view::npos) {
      parts.push_back(line.substr(pos));
      return parts;
    }
    parts.push_back(line.substr(pos, end - pos));
    pos = end + 1;
  }
}

std::string lower(std::string_view text) {
  std::string out(text);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

void write_files_atomically(const std::filesystem::path& directory,
                            const std::vector<std::pair<std::string, std::string>>& files) {
  namespace fs = std::filesystem;
  std::error_code ec;
  fs::create_directories(directory, ec);
  if (ec) throw Error(ErrorKind::io, "cannot create " + directory.string() + ": " + ec.message());

  std::vector<fs::path> staged;
  auto discard = [&] {
    for (const auto& p : staged) fs::remove(p, ec);
  };
  for (const auto& [name, contents] : files) {
    const fs::path tmp = directory / (name + ".tmp");
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (out) staged.push_back(tmp);
    out << contents;
    out.close();
    if (!out) {
      discard();
      throw Error(ErrorKind::io, "cannot write " + tmp.string());
    }
  }
  for (std::size_t i = 0; i < files.size(); ++i) {
    fs::rename(staged[i], directory / files[i].first, ec);
    if (ec) {
      discard();
      throw Error(ErrorKind::io, "cannot rename into " + (directory / files[i].first).string() +
                                     ": " + ec.message());
    }
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace annpso::text
