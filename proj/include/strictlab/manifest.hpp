#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "strictlab/model.hpp"
#include "strictlab/sampler.hpp"

namespace strictlab {

struct ManifestError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Flat `key = value` manifest, one entry per line, `#` comments, arrays as
// comma-separated values.
class ExperimentManifest {
public:
    static ExperimentManifest parse_file(const std::string& path) {
        std::ifstream in(path);
        if (!in) throw ManifestError("cannot read manifest: " + path);
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_string(ss.str());
    }

    static ExperimentManifest parse_string(const std::string& text) {
        ExperimentManifest m;
        m.raw_text_ = text;
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line = line.substr(0, hash);
            const std::string stripped = trim(line);
            if (stripped.empty()) continue;
            const auto eq = stripped.find('=');
            if (eq == std::string::npos)
                throw ManifestError("manifest line " + std::to_string(lineno) +
                                    ": expected key = value");
            const std::string key = trim(stripped.substr(0, eq));
            const std::string value = trim(stripped.substr(eq + 1));
            if (key.empty())
                throw ManifestError("manifest line " + std::to_string(lineno) +
                                    ": empty key");
            m.entries_[key] = {value, lineno};
        }
        m.validate();
        return m;
    }

    const std::string& raw_text() const { return raw_text_; }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::string get_string(const std::string& key) const {
        return require(key).value;
    }

    double get_double(const std::string& key) const {
        const Entry& e = require(key);
        return parse_double(e.value, key, e.line);
    }

    double get_double(const std::string& key, double fallback) const {
        return has(key) ? get_double(key) : fallback;
    }

    std::uint64_t get_u64(const std::string& key, std::uint64_t fallback) const {
        if (!has(key)) return fallback;
        const Entry& e = require(key);
        try {
            std::size_t pos = 0;
            const std::uint64_t v = std::stoull(e.value, &pos);
            if (pos != e.value.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ManifestError(field_err(key, e.line, "not an unsigned integer"));
        }
    }

    long get_count(const std::string& key, long fallback) const {
        if (!has(key)) return fallback;
        const Entry& e = require(key);
        try {
            std::size_t pos = 0;
            const long v = std::stol(e.value, &pos);
            if (pos != e.value.size() || v < 0) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ManifestError(field_err(key, e.line, "not a nonnegative integer"));
        }
    }

    std::vector<double> get_list(const std::string& key) const {
        const Entry& e = require(key);
        std::vector<double> out;
        std::istringstream ss(e.value);
        std::string item;
        while (std::getline(ss, item, ','))
            out.push_back(parse_double(trim(item), key, e.line));
        if (out.empty()) throw ManifestError(field_err(key, e.line, "empty list"));
        return out;
    }

    bool is_preset() const { return has("preset_R"); }

    ModelParams build_params() const {
        if (is_preset())
            return preset_params(get_double("preset_R"), get_double("preset_delta"));
        ModelParams p;
        p.mu = get_double("mu");
        p.lambda = get_double("lambda");
        p.R = get_double("R");
        p.h = get_double("h", 0.0);
        p.eps = get_double("eps");
        const double rho = get_double("rho");
        p.profile = InteractionProfile{get_double("U"), get_double("U_bar"),
                                       get_double("u"), rho,
                                       get_double("k_lo", 0.0),
                                       get_double("k_hi", rho)};
        try {
            p.validate();
        } catch (const std::exception& e) {
            throw ManifestError(std::string("invalid parameters: ") + e.what());
        }
        return p;
    }

    int lattice_size() const {
        const long L = get_count("L", 0);
        if (L < 2) throw ManifestError("field L: lattice size must be >= 2");
        return static_cast<int>(L);
    }

    std::vector<double> betas() const {
        auto b = get_list("beta");
        for (double v : b)
            if (!(v > 0.0)) throw ManifestError("field beta: values must be > 0");
        return b;
    }

    SamplerConfig build_sampler(std::optional<std::uint64_t> seed_override) const {
        SamplerConfig cfg;
        cfg.seed = seed_override ? *seed_override : get_u64("seed", 1);
        cfg.therm_sweeps = get_count("therm_sweeps", 0);
        cfg.measure_sweeps = get_count("measure_sweeps", 0);
        cfg.measure_stride = std::max<long>(1, get_count("measure_stride", 1));
        cfg.proposal_width = get_double("proposal_width", 0.0);
        const std::string mode = has("r_mode") ? get_string("r_mode") : "continuous";
        if (mode == "continuous") {
            cfg.r_mode = RMode::Continuous;
        } else if (mode == "grid") {
            cfg.r_mode = RMode::Grid;
            if (has("grid")) cfg.grid = get_list("grid");
        } else {
            throw ManifestError("field r_mode: expected continuous or grid");
        }
        const std::string init = has("init") ? get_string("init") : "expanded";
        if (init == "contracted") {
            cfg.init = InitKind::ContractedAligned;
        } else if (init == "expanded") {
            cfg.init = InitKind::ExpandedDisordered;
        } else {
            throw ManifestError("field init: expected contracted or expanded");
        }
        return cfg;
    }

    // FNV-1a over the manifest bytes, recorded in every output header.
    std::uint64_t hash() const {
        std::uint64_t h = 1469598103934665603ULL;
        for (unsigned char c : raw_text_) {
            h ^= c;
            h *= 1099511628211ULL;
        }
        return h;
    }

private:
    struct Entry {
        std::string value;
        int line = 0;
    };

    void validate() const {
        const bool preset = has("preset_R") || has("preset_delta");
        const bool explicit_block = has("mu") || has("U") || has("rho");
        if (preset && explicit_block)
            throw ManifestError(
                "manifest mixes preset_R/preset_delta with explicit parameters");
        if (!preset && !explicit_block)
            throw ManifestError(
                "manifest needs either preset_R/preset_delta or explicit parameters");
        if (preset && (!has("preset_R") || !has("preset_delta")))
            throw ManifestError("preset requires both preset_R and preset_delta");
        if (has("beta")) betas();  // surface malformed values at parse time
    }

    const Entry& require(const std::string& key) const {
        const auto it = entries_.find(key);
        if (it == entries_.end())
            throw ManifestError("missing manifest field: " + key);
        return it->second;
    }

    static std::string field_err(const std::string& key, int line,
                                 const std::string& what) {
        return "manifest line " + std::to_string(line) + ", field " + key + ": " +
               what;
    }

    static double parse_double(const std::string& text, const std::string& key,
                               int line) {
        try {
            std::size_t pos = 0;
            const double v = std::stod(text, &pos);
            if (pos != text.size()) throw std::invalid_argument("");
            return v;
        } catch (const std::exception&) {
            throw ManifestError(field_err(key, line, "not a number: '" + text + "'"));
        }
    }

    static std::string trim(const std::string& s) {
        const auto b = s.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) return "";
        const auto e = s.find_last_not_of(" \t\r\n");
        return s.substr(b, e - b + 1);
    }

    std::string raw_text_;
    std::map<std::string, Entry> entries_;
};

}  // namespace strictlab
