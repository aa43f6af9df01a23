#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

namespace hopqpp {

/// 64-bit FNV-1a; used for index checksums and run-manifest input digests.
class Fnv1a64 {
  public:
    void update(std::string_view bytes) noexcept
    {
        for (unsigned char c : bytes) {
            m_state ^= c;
            m_state *= 0x100000001b3ULL;
        }
    }
    [[nodiscard]] std::uint64_t value() const noexcept { return m_state; }

  private:
    std::uint64_t m_state = 0xcbf29ce484222325ULL;
};

std::string to_hex(std::uint64_t value);

/// Hex digest of a file's contents. Throws Io when the file cannot be read.
std::string file_digest(const std::filesystem::path& path);

}  // namespace hopqpp
