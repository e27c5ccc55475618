#include "jsscl/instance.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "jsscl/parallel.hpp"
#include "jsscl/rng.hpp"

namespace jsscl {

using nlohmann::json;
using nlohmann::ordered_json;

std::string to_hex(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string out(16, '0');
    for (int i = 15; i >= 0; --i) {
        out[static_cast<std::size_t>(i)] = digits[v & 0xf];
        v >>= 4;
    }
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open for writing: " + tmp.string());
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ValidationError("short write: " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValidationError("cannot open for reading: " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void TimeDist::validate() const {
    if (low < 1) throw ValidationError("time_dist: low must be >= 1");
    if (high < low) throw ValidationError("time_dist: high must be >= low");
    if (kind == Kind::normal && stddev <= 0.0)
        throw ValidationError("time_dist: stddev must be > 0");
}

ordered_json TimeDist::to_json() const {
    ordered_json j;
    j["type"] = kind == Kind::uniform ? "uniform" : "normal";
    j["low"] = low;
    j["high"] = high;
    if (kind == Kind::normal) {
        j["mean"] = mean;
        j["stddev"] = stddev;
    }
    return j;
}

TimeDist TimeDist::from_json(const json& j) {
    TimeDist d;
    std::string type = j.at("type").get<std::string>();
    if (type == "uniform") {
        d.kind = Kind::uniform;
    } else if (type == "normal") {
        d.kind = Kind::normal;
        d.mean = j.at("mean").get<double>();
        d.stddev = j.at("stddev").get<double>();
    } else {
        throw ValidationError("time_dist: unknown type '" + type + "'");
    }
    d.low = j.at("low").get<int>();
    d.high = j.at("high").get<int>();
    d.validate();
    return d;
}

void GenConfig::validate() const {
    if (n_jobs < 1) throw ValidationError("gen config: n_jobs must be >= 1");
    if (n_machines < 1) throw ValidationError("gen config: n_machines must be >= 1");
    time_dist.validate();
}

int JsspInstance::total_proc(int job) const {
    const auto& row = proc_time[static_cast<std::size_t>(job)];
    return std::accumulate(row.begin(), row.end(), 0);
}

void JsspInstance::validate() const {
    auto fail = [this](const std::string& what) {
        throw ValidationError("instance " + std::to_string(id) + ": " + what);
    };
    if (n_jobs < 1 || n_machines < 1) fail("non-positive dimensions");
    if (static_cast<int>(machine_order.size()) != n_jobs ||
        static_cast<int>(proc_time.size()) != n_jobs)
        fail("row count does not match n_jobs");
    std::vector<char> seen(static_cast<std::size_t>(n_machines));
    for (int j = 0; j < n_jobs; ++j) {
        const auto& order = machine_order[static_cast<std::size_t>(j)];
        const auto& times = proc_time[static_cast<std::size_t>(j)];
        if (static_cast<int>(order.size()) != n_machines ||
            static_cast<int>(times.size()) != n_machines)
            fail("row " + std::to_string(j) + " does not match n_machines");
        std::fill(seen.begin(), seen.end(), 0);
        for (int k = 0; k < n_machines; ++k) {
            int m = order[static_cast<std::size_t>(k)];
            if (m < 0 || m >= n_machines || seen[static_cast<std::size_t>(m)])
                fail("machine_order row " + std::to_string(j) + " is not a permutation");
            seen[static_cast<std::size_t>(m)] = 1;
            if (times[static_cast<std::size_t>(k)] < 1)
                fail("proc_time[" + std::to_string(j) + "][" + std::to_string(k) + "] < 1");
        }
    }
}

namespace {

int draw_time(Rng& rng, const TimeDist& d) {
    if (d.kind == TimeDist::Kind::uniform) return rng.uniform_int(d.low, d.high);
    for (int attempt = 0; attempt < 100000; ++attempt) {
        double x = rng.normal(d.mean, d.stddev);
        if (x >= d.low && x <= d.high) return static_cast<int>(std::lround(x));
    }
    throw ValidationError("time_dist: truncation bounds reject the normal draw; "
                          "check mean/stddev against [low, high]");
}

} // namespace

JsspInstance generate_instance(const GenConfig& cfg, int index) {
    cfg.validate();
    if (index < 0) throw ValidationError("generate_instance: index must be >= 0");
    Rng rng(derive_seed(cfg.seed, static_cast<std::uint64_t>(index)));
    JsspInstance inst;
    inst.id = index;
    inst.n_jobs = cfg.n_jobs;
    inst.n_machines = cfg.n_machines;
    inst.machine_order.resize(static_cast<std::size_t>(cfg.n_jobs));
    inst.proc_time.resize(static_cast<std::size_t>(cfg.n_jobs));
    for (int j = 0; j < cfg.n_jobs; ++j) {
        auto& order = inst.machine_order[static_cast<std::size_t>(j)];
        order.resize(static_cast<std::size_t>(cfg.n_machines));
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        auto& times = inst.proc_time[static_cast<std::size_t>(j)];
        times.resize(static_cast<std::size_t>(cfg.n_machines));
        for (int k = 0; k < cfg.n_machines; ++k)
            times[static_cast<std::size_t>(k)] = draw_time(rng, cfg.time_dist);
    }
    return inst;
}

Dataset generate_dataset(const GenConfig& cfg, int count, int workers) {
    cfg.validate();
    if (count < 1) throw ValidationError("generate_dataset: count must be >= 1");
    Dataset out(static_cast<std::size_t>(count));
    parallel_for(count, workers,
                 [&](int i) { out[static_cast<std::size_t>(i)] = generate_instance(cfg, i); });
    return out;
}

namespace {

ordered_json instance_json(const JsspInstance& inst) {
    ordered_json j;
    j["id"] = inst.id;
    j["machine_order"] = inst.machine_order;
    j["proc_time"] = inst.proc_time;
    return j;
}

} // namespace

void write_dataset(const Dataset& dataset, const GenConfig& cfg,
                   const std::filesystem::path& path) {
    cfg.validate();
    ordered_json header;
    header["version"] = 1;
    header["n_jobs"] = cfg.n_jobs;
    header["n_machines"] = cfg.n_machines;
    header["time_dist"] = cfg.time_dist.to_json();
    header["seed"] = cfg.seed;
    header["count"] = dataset.size();
    std::string out = header.dump();
    out.push_back('\n');
    for (const auto& inst : dataset) {
        out += instance_json(inst).dump();
        out.push_back('\n');
    }
    write_file_atomic(path, out);
}

LoadedDataset read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open dataset: " + path.string());
    LoadedDataset result;
    std::string line;
    int line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": parse error: " + e.what());
        }
        try {
            if (!have_header) {
                result.cfg.n_jobs = j.at("n_jobs").get<int>();
                result.cfg.n_machines = j.at("n_machines").get<int>();
                result.cfg.time_dist = TimeDist::from_json(j.at("time_dist"));
                result.cfg.seed = j.at("seed").get<std::uint64_t>();
                have_header = true;
                continue;
            }
            JsspInstance inst;
            inst.id = j.at("id").get<int>();
            inst.machine_order = j.at("machine_order").get<std::vector<std::vector<int>>>();
            inst.proc_time = j.at("proc_time").get<std::vector<std::vector<int>>>();
            inst.n_jobs = static_cast<int>(inst.machine_order.size());
            inst.n_machines = inst.n_jobs > 0 ? static_cast<int>(inst.machine_order[0].size()) : 0;
            if (inst.n_jobs != result.cfg.n_jobs || inst.n_machines != result.cfg.n_machines)
                throw ValidationError("instance " + std::to_string(inst.id) +
                                      ": dimensions do not match dataset header");
            inst.validate();
            result.instances.push_back(std::move(inst));
        } catch (const json::exception& e) {
            throw ValidationError(path.string() + ":" + std::to_string(line_no) +
                                  ": bad record: " + e.what());
        }
    }
    return result;
}

std::string dataset_hash(const Dataset& dataset) {
    std::string buf;
    buf.reserve(dataset.size() * 128);
    for (const auto& inst : dataset) {
        buf += instance_json(inst).dump();
        buf.push_back('\n');
    }
    return to_hex(fnv1a64(buf));
}

} // namespace jsscl
