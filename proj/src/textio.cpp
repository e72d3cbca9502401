#include "seamsentinel/textio.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <system_error>

#include "seamsentinel/error.hpp"

namespace seam {

std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

std::string format_int(long long value) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text, const std::string& context) {
    text = trim(text);
    double value = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        fail(ErrorKind::Format, context + ": not a number: '" + std::string(text) + "'");
    return value;
}

long long parse_int(std::string_view text, const std::string& context) {
    text = trim(text);
    long long value = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        fail(ErrorKind::Format, context + ": not an integer: '" + std::string(text) + "'");
    return value;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r'))
        s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    for (std::size_t i = 0; i <= s.size(); ++i) {
        if (i == s.size() || s[i] == sep) {
            out.push_back(s.substr(start, i - start));
            start = i + 1;
        }
    }
    return out;
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (const char c : data) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t value) {
    static const char digits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[value & 0xf];
        value >>= 4;
    }
    return out;
}

std::map<std::string, std::string> parse_key_value_text(std::string_view text,
                                                        const std::string& context) {
    std::map<std::string, std::string> out;
    std::size_t line_no = 0;
    for (const auto raw_line : split(text, '\n')) {
        ++line_no;
        auto line = trim(raw_line);
        if (line.empty() || line.front() == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail(ErrorKind::Format,
                 context + ": line " + format_int(static_cast<long long>(line_no)) +
                     ": expected key=value");
        const auto key = trim(line.substr(0, eq));
        const auto value = trim(line.substr(eq + 1));
        if (key.empty())
            fail(ErrorKind::Format,
                 context + ": line " + format_int(static_cast<long long>(line_no)) +
                     ": empty key");
        out[std::string(key)] = std::string(value);
    }
    return out;
}

std::map<std::string, std::string> parse_key_value_file(const std::filesystem::path& path) {
    return parse_key_value_text(read_text_file(path), path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::Io, "cannot open " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) fail(ErrorKind::Io, "read failure on " + path.string());
    return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::Io, "cannot open " + path.string() + " for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) fail(ErrorKind::Io, "write failure on " + path.string());
}

}  // namespace seam
