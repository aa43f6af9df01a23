#include "hopqpp/digest.hpp"

#include "hopqpp/error.hpp"

#include <array>
#include <fstream>

namespace hopqpp {

std::string to_hex(std::uint64_t value)
{
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = kDigits[value & 0xFU];
        value >>= 4;
    }
    return out;
}

std::string file_digest(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorKind::Io, "cannot read file: " + path.string());
    }
    Fnv1a64 digest;
    std::array<char, 1 << 16> buf{};
    while (in) {
        in.read(buf.data(), buf.size());
        digest.update(std::string_view(buf.data(), static_cast<std::size_t>(in.gcount())));
    }
    return "fnv1a64:" + to_hex(digest.value());
}

}  // namespace hopqpp
