#ifndef JSSCL_COMMON_HPP
#define JSSCL_COMMON_HPP

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

namespace jsscl {

// Raised on bad user input or broken data-file contracts. The CLI maps it
// to exit code 1; anything else escaping to main is a bug.
class ValidationError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// Identifies one task: the pos-th operation of a job (0-based).
struct TaskId {
    int job = 0;
    int pos = 0;

    friend bool operator==(const TaskId&, const TaskId&) = default;
};

// FNV-1a, used for dataset/config fingerprints in manifests.
inline std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string to_hex(std::uint64_t v);

// Write-temp-then-rename, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);

std::string read_file(const std::filesystem::path& path);

} // namespace jsscl

#endif
