#pragma once

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "sigsel/wf.hpp"

namespace sigsel {

namespace detail {

inline std::string format_double(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char ch : line) {
        if (ch == ',') {
            cells.push_back(cur);
            cur.clear();
        } else if (ch != '\r') {
            cur += ch;
        }
    }
    cells.push_back(cur);
    return cells;
}

inline double parse_cell(const std::string& cell, std::size_t row, std::size_t col) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(cell, &pos);
        while (pos < cell.size() && (cell[pos] == ' ' || cell[pos] == '\t')) ++pos;
        if (pos != cell.size()) throw std::invalid_argument(cell);
        return v;
    } catch (const std::exception&) {
        throw std::runtime_error("non-numeric cell '" + cell + "' at row " + std::to_string(row) + ", column " +
                                 std::to_string(col + 1));
    }
}

}  // namespace detail

// Header: generation,locus_1..locus_l[,replicate]. One row per observation.
inline void write_trajectory_csv(std::ostream& os, const std::vector<Trajectory>& reps) {
    if (reps.empty()) throw std::invalid_argument("no trajectories to write");
    const std::size_t loci = reps.front().loci();
    os << "generation";
    for (std::size_t l = 0; l < loci; ++l) os << ",locus_" << (l + 1);
    if (reps.size() > 1) os << ",replicate";
    os << "\n";
    for (std::size_t r = 0; r < reps.size(); ++r) {
        const Trajectory& t = reps[r];
        if (t.loci() != loci) throw std::invalid_argument("replicates disagree on locus count");
        for (std::size_t i = 0; i < t.rows(); ++i) {
            os << t.times[i];
            for (std::size_t l = 0; l < loci; ++l) os << "," << detail::format_double(t.freqs[i][l]);
            if (reps.size() > 1) os << "," << (r + 1);
            os << "\n";
        }
    }
}

inline void write_trajectory_csv(const std::filesystem::path& path, const std::vector<Trajectory>& reps) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_trajectory_csv(os, reps);
}

// Parses a trajectory CSV; a replicate column splits rows into several
// trajectories sharing one time grid. Errors carry row/column diagnostics
// (row 1 = header).
inline std::vector<Trajectory> ingest_trajectory(std::istream& is, const std::string& origin = "<stream>") {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error(origin + ": empty file");
    const std::vector<std::string> header = detail::split_csv_line(line);
    if (header.empty() || header.front() != "generation")
        throw std::runtime_error(origin + ": malformed header, expected first column 'generation'");
    bool has_replicate = !header.empty() && header.back() == "replicate";
    const std::size_t loci = header.size() - 1 - (has_replicate ? 1 : 0);
    if (loci < 1) throw std::runtime_error(origin + ": malformed header, no locus columns");
    for (std::size_t l = 0; l < loci; ++l)
        if (header[l + 1] != "locus_" + std::to_string(l + 1))
            throw std::runtime_error(origin + ": malformed header, expected 'locus_" + std::to_string(l + 1) +
                                     "' in column " + std::to_string(l + 2));

    std::vector<Trajectory> reps;
    std::vector<std::int64_t> rep_ids;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error(origin + ": row " + std::to_string(row) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        const double gen_d = detail::parse_cell(cells[0], row, 0);
        const auto gen = static_cast<std::int64_t>(std::llround(gen_d));
        std::int64_t rep_id = 1;
        if (has_replicate) {
            rep_id = static_cast<std::int64_t>(std::llround(detail::parse_cell(cells.back(), row, cells.size() - 1)));
        }
        std::size_t slot = 0;
        for (; slot < rep_ids.size(); ++slot)
            if (rep_ids[slot] == rep_id) break;
        if (slot == rep_ids.size()) {
            rep_ids.push_back(rep_id);
            reps.emplace_back();
        }
        Trajectory& t = reps[slot];
        if (!t.times.empty() && gen <= t.times.back())
            throw std::runtime_error(origin + ": non-monotone generation " + std::to_string(gen) + " at row " +
                                     std::to_string(row));
        std::vector<double> f(loci);
        for (std::size_t l = 0; l < loci; ++l) {
            f[l] = detail::parse_cell(cells[l + 1], row, l + 1);
            if (!(f[l] >= 0.0 && f[l] <= 1.0))
                throw std::runtime_error(origin + ": frequency " + cells[l + 1] + " out of [0,1] at row " +
                                         std::to_string(row) + ", column " + std::to_string(l + 2));
        }
        t.times.push_back(gen);
        t.freqs.push_back(std::move(f));
    }
    if (reps.empty()) throw std::runtime_error(origin + ": no data rows");
    for (std::size_t i = 1; i < reps.size(); ++i)
        if (reps[i].times != reps.front().times)
            throw std::runtime_error(origin + ": replicates disagree on the time grid");
    return reps;
}

inline std::vector<Trajectory> ingest_trajectory(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    return ingest_trajectory(is, path.string());
}

// Samples CSV: header = parameter names, one row per kept posterior draw.
inline void write_samples_csv(std::ostream& os, const std::vector<std::string>& names,
                              const std::vector<std::vector<double>>& samples) {
    for (std::size_t j = 0; j < names.size(); ++j) os << (j ? "," : "") << names[j];
    os << "\n";
    for (const auto& rowv : samples) {
        if (rowv.size() != names.size()) throw std::invalid_argument("sample row width does not match header");
        for (std::size_t j = 0; j < rowv.size(); ++j) os << (j ? "," : "") << detail::format_double(rowv[j]);
        os << "\n";
    }
}

inline void write_samples_csv(const std::filesystem::path& path, const std::vector<std::string>& names,
                              const std::vector<std::vector<double>>& samples) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open " + path.string() + " for writing");
    write_samples_csv(os, names, samples);
}

inline std::pair<std::vector<std::string>, std::vector<std::vector<double>>> read_samples_csv(
    const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot open " + path.string());
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error(path.string() + ": empty file");
    const std::vector<std::string> names = detail::split_csv_line(line);
    std::vector<std::vector<double>> samples;
    std::size_t row = 1;
    while (std::getline(is, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = detail::split_csv_line(line);
        if (cells.size() != names.size())
            throw std::runtime_error(path.string() + ": row " + std::to_string(row) + " width mismatch");
        std::vector<double> v(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) v[j] = detail::parse_cell(cells[j], row, j);
        samples.push_back(std::move(v));
    }
    return {names, samples};
}

}  // namespace sigsel
