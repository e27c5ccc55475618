#include "jsscl/curriculum.hpp"

#include <algorithm>
#include <unordered_map>

#include "jsscl/parallel.hpp"
#include "jsscl/rng.hpp"

namespace jsscl {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_string(CurriculumElement e) {
    switch (e) {
        case CurriculumElement::e_n: return "e_n";
        case CurriculumElement::e_r: return "e_r";
        case CurriculumElement::h_n: return "h_n";
        case CurriculumElement::h_r: return "h_r";
    }
    throw std::logic_error("unknown CurriculumElement");
}

CurriculumElement element_from_string(const std::string& name) {
    for (CurriculumElement e : kAllElements)
        if (to_string(e) == name) return e;
    throw ValidationError("unknown curriculum element '" + name + "'");
}

DtsResult compute_dts(const Dataset& dataset, const std::vector<OptimaRecord>* optima,
                      int workers) {
    if (dataset.empty()) throw ValidationError("compute_dts: empty dataset");
    std::unordered_map<int, int> optimum_by_id;
    if (optima != nullptr) {
        for (const OptimaRecord& r : *optima)
            if (r.proved) optimum_by_id[r.id] = r.optimum;
    }

    constexpr std::array<PdrKind, 6> deterministic = {PdrKind::SPT,  PdrKind::LPT,
                                                      PdrKind::MTR,  PdrKind::LRPT,
                                                      PdrKind::LOUM, PdrKind::MPTLOM};
    int n = static_cast<int>(dataset.size());
    std::vector<std::array<int, 6>> makespans(static_cast<std::size_t>(n));
    parallel_for(n, workers, [&](int i) {
        for (std::size_t ki = 0; ki < deterministic.size(); ++ki)
            makespans[static_cast<std::size_t>(i)][ki] =
                solve_with_pdr(dataset[static_cast<std::size_t>(i)], deterministic[ki]).makespan;
    });

    // Score each rule: mean gap against proved optima when available,
    // otherwise mean makespan. Lower wins; ties fall to enum order.
    std::size_t best_ki = 0;
    double best_score = 0.0;
    for (std::size_t ki = 0; ki < deterministic.size(); ++ki) {
        double sum = 0.0;
        long long counted = 0;
        for (int i = 0; i < n; ++i) {
            int ms = makespans[static_cast<std::size_t>(i)][ki];
            if (optima != nullptr) {
                auto it = optimum_by_id.find(dataset[static_cast<std::size_t>(i)].id);
                if (it == optimum_by_id.end()) continue;
                sum += gap(ms, it->second);
            } else {
                sum += ms;
            }
            ++counted;
        }
        if (counted == 0) throw ValidationError("compute_dts: no usable optima for scoring");
        double score = sum / static_cast<double>(counted);
        if (ki == 0 || score < best_score) {
            best_score = score;
            best_ki = ki;
        }
    }

    DtsResult result;
    result.best = deterministic[best_ki];
    result.records.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        result.records.push_back({dataset[static_cast<std::size_t>(i)].id,
                                  makespans[static_cast<std::size_t>(i)][best_ki], result.best});
    return result;
}

std::map<CurriculumElement, std::vector<int>> build_elements(std::vector<DtsRecord> records) {
    if (records.size() % 2 != 0)
        throw ValidationError("build_elements: record count must be even, got " +
                              std::to_string(records.size()));
    if (records.empty()) throw ValidationError("build_elements: no records");
    std::sort(records.begin(), records.end(), [](const DtsRecord& a, const DtsRecord& b) {
        return a.dts != b.dts ? a.dts < b.dts : a.instance_id < b.instance_id;
    });
    std::size_t half = records.size() / 2;
    std::vector<int> easy, hard;
    easy.reserve(half);
    hard.reserve(half);
    for (std::size_t i = 0; i < half; ++i) easy.push_back(records[i].instance_id);
    for (std::size_t i = half; i < records.size(); ++i) hard.push_back(records[i].instance_id);

    std::map<CurriculumElement, std::vector<int>> elements;
    elements[CurriculumElement::e_n] = easy;
    std::reverse(easy.begin(), easy.end());
    elements[CurriculumElement::e_r] = std::move(easy);
    elements[CurriculumElement::h_n] = hard;
    std::reverse(hard.begin(), hard.end());
    elements[CurriculumElement::h_r] = std::move(hard);
    return elements;
}

Curriculum build_curriculum(const std::map<CurriculumElement, std::vector<int>>& elements,
                            CurriculumElement first, CurriculumElement second) {
    Curriculum cur;
    cur.first = to_string(first);
    cur.second = to_string(second);
    const auto& a = elements.at(first);
    const auto& b = elements.at(second);
    cur.order.reserve(a.size() + b.size());
    cur.order.insert(cur.order.end(), a.begin(), a.end());
    cur.order.insert(cur.order.end(), b.begin(), b.end());
    return cur;
}

std::vector<Curriculum> all_curricula(const std::map<CurriculumElement, std::vector<int>>& elements) {
    std::vector<Curriculum> out;
    out.reserve(16);
    for (CurriculumElement first : kAllElements)
        for (CurriculumElement second : kAllElements)
            out.push_back(build_curriculum(elements, first, second));
    return out;
}

Curriculum shuffled_baseline(int dataset_size, std::uint64_t seed) {
    if (dataset_size < 1) throw ValidationError("shuffled_baseline: dataset_size must be >= 1");
    Curriculum cur;
    cur.first = "shuffled";
    cur.second = "shuffled";
    cur.order.resize(static_cast<std::size_t>(dataset_size));
    for (int i = 0; i < dataset_size; ++i) cur.order[static_cast<std::size_t>(i)] = i;
    Rng rng(derive_seed(seed, 0x5b0f731eull));
    rng.shuffle(cur.order);
    return cur;
}

void write_curriculum(const Curriculum& cur, const std::string& dataset_hash,
                      const std::string& rule_used, const std::filesystem::path& path,
                      std::optional<std::uint64_t> seed) {
    ordered_json j;
    j["version"] = 1;
    j["dataset_hash"] = dataset_hash;
    j["rule_used"] = rule_used;
    j["first"] = cur.first;
    j["second"] = cur.second;
    if (seed) j["seed"] = *seed;
    j["order"] = cur.order;
    std::string out = j.dump();
    out.push_back('\n');
    write_file_atomic(path, out);
}

LoadedCurriculum read_curriculum(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": parse error: " + std::string(e.what()));
    }
    LoadedCurriculum out;
    try {
        out.dataset_hash = j.at("dataset_hash").get<std::string>();
        out.rule_used = j.at("rule_used").get<std::string>();
        out.cur.first = j.at("first").get<std::string>();
        out.cur.second = j.at("second").get<std::string>();
        out.cur.order = j.at("order").get<std::vector<int>>();
        if (j.contains("seed")) out.seed = j.at("seed").get<std::uint64_t>();
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": bad manifest: " + std::string(e.what()));
    }
    return out;
}

void write_dts(const DtsResult& dts, const std::string& dataset_hash,
               const std::filesystem::path& path) {
    ordered_json j;
    j["version"] = 1;
    j["dataset_hash"] = dataset_hash;
    j["rule_used"] = to_string(dts.best);
    ordered_json recs = ordered_json::array();
    for (const DtsRecord& r : dts.records) {
        ordered_json rec;
        rec["instance_id"] = r.instance_id;
        rec["dts"] = r.dts;
        recs.push_back(std::move(rec));
    }
    j["records"] = std::move(recs);
    std::string out = j.dump();
    out.push_back('\n');
    write_file_atomic(path, out);
}

LoadedDts read_dts(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": parse error: " + std::string(e.what()));
    }
    LoadedDts out;
    try {
        out.dataset_hash = j.at("dataset_hash").get<std::string>();
        out.dts.best = pdr_from_string(j.at("rule_used").get<std::string>());
        for (const auto& rec : j.at("records")) {
            DtsRecord r;
            r.instance_id = rec.at("instance_id").get<int>();
            r.dts = rec.at("dts").get<int>();
            r.rule_used = out.dts.best;
            out.dts.records.push_back(r);
        }
    } catch (const json::exception& e) {
        throw ValidationError(path.string() + ": bad dts file: " + std::string(e.what()));
    }
    return out;
}

} // namespace jsscl
