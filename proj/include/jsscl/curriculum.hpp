#ifndef JSSCL_CURRICULUM_HPP
#define JSSCL_CURRICULUM_HPP

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "jsscl/exact.hpp"
#include "jsscl/instance.hpp"
#include "jsscl/pdr.hpp"

namespace jsscl {

// Difficulty to solve: the makespan the dataset's best deterministic PDR
// achieves on the instance.
struct DtsRecord {
    int instance_id = 0;
    int dts = 0;
    PdrKind rule_used = PdrKind::MTR;
};

enum class CurriculumElement { e_n, e_r, h_n, h_r };

inline constexpr std::array<CurriculumElement, 4> kAllElements = {
    CurriculumElement::e_n, CurriculumElement::e_r, CurriculumElement::h_n,
    CurriculumElement::h_r};

std::string to_string(CurriculumElement e);
CurriculumElement element_from_string(const std::string& name);

// Training order over instance ids. first/second are element names
// ("e_n".."h_r"), or both "shuffled" for the unordered baseline.
struct Curriculum {
    std::string first;
    std::string second;
    std::vector<int> order;
};

struct DtsResult {
    std::vector<DtsRecord> records;
    PdrKind best = PdrKind::MTR;
};

// Evaluates all deterministic (non-RANDOM) PDRs over the dataset; picks the
// rule with the lowest mean makespan (lowest mean gap when optima are given)
// and takes that single rule's makespan as each instance's DTS.
DtsResult compute_dts(const Dataset& dataset, const std::vector<OptimaRecord>* optima = nullptr,
                      int workers = 1);

// Sort ascending by (dts, instance_id); easy = first half, hard = second
// half. e_n/h_n keep the ascending order, e_r/h_r reverse it. Throws on odd
// record counts.
std::map<CurriculumElement, std::vector<int>> build_elements(std::vector<DtsRecord> records);

Curriculum build_curriculum(const std::map<CurriculumElement, std::vector<int>>& elements,
                            CurriculumElement first, CurriculumElement second);

// The 4x4 product in fixed enumeration order (first varies slowest).
std::vector<Curriculum> all_curricula(const std::map<CurriculumElement, std::vector<int>>& elements);

// Seeded uniform permutation of 0..dataset_size-1, labeled "shuffled".
Curriculum shuffled_baseline(int dataset_size, std::uint64_t seed);

// Manifest: {version, dataset_hash, rule_used, first, second, seed?, order}.
void write_curriculum(const Curriculum& cur, const std::string& dataset_hash,
                      const std::string& rule_used, const std::filesystem::path& path,
                      std::optional<std::uint64_t> seed = std::nullopt);

struct LoadedCurriculum {
    Curriculum cur;
    std::string dataset_hash;
    std::string rule_used;
    std::optional<std::uint64_t> seed;
};

LoadedCurriculum read_curriculum(const std::filesystem::path& path);

// DTS file: {version, dataset_hash, rule_used, records: [{instance_id, dts}]}.
void write_dts(const DtsResult& dts, const std::string& dataset_hash,
               const std::filesystem::path& path);

struct LoadedDts {
    DtsResult dts;
    std::string dataset_hash;
};

LoadedDts read_dts(const std::filesystem::path& path);

} // namespace jsscl

#endif
