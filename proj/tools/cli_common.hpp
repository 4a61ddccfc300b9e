#pragma once

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <stdexcept>
#include <string>
#include <thread>
#include <variant>
#include <vector>

#include <json.hpp>

#include "hopfield/spectrum.hpp"

namespace cli {

using Json = nlohmann::ordered_json;

struct SweepAxis {
    std::string var;
    double start = 0.0;
    double stop = 0.0;
    int count = 1;
    bool log = false;

    std::vector<double> values() const {
        if (count < 1) throw hopfield::InvalidParams("sweep count must be >= 1");
        std::vector<double> v(count);
        if (count == 1) {
            v[0] = start;
            return v;
        }
        if (log) {
            if (!(start > 0.0) || !(stop > 0.0))
                throw hopfield::InvalidParams("log sweep needs positive bounds");
            const double a = std::log(start), b = std::log(stop);
            for (int i = 0; i < count; ++i)
                v[i] = std::exp(a + (b - a) * i / double(count - 1));
        } else {
            for (int i = 0; i < count; ++i)
                v[i] = start + (stop - start) * i / double(count - 1);
        }
        return v;
    }
};

hopfield::DRule parse_drule(const std::string& s);

// 17 significant digits: round-trip exact for binary64
inline std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

using Cell = std::variant<double, long long, std::string>;

class CsvWriter {
  public:
    explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}

    void row(std::vector<Cell> cells) {
        if (cells.size() != header_.size())
            throw std::logic_error("csv row arity mismatch");
        rows_.push_back(std::move(cells));
    }
    std::size_t size() const { return rows_.size(); }

    std::string render() const {
        std::string out;
        for (std::size_t i = 0; i < header_.size(); ++i)
            out += (i ? "," : "") + header_[i];
        out += "\n";
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) out += ",";
                if (std::holds_alternative<double>(r[i]))
                    out += fmt(std::get<double>(r[i]));
                else if (std::holds_alternative<long long>(r[i]))
                    out += std::to_string(std::get<long long>(r[i]));
                else
                    out += std::get<std::string>(r[i]);
            }
            out += "\n";
        }
        return out;
    }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<Cell>> rows_;
};

// whole-file writes through a temp path: partial outputs never land
inline void write_atomic(const std::string& path, const std::string& content) {
    const std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot open " + tmp);
        f << content;
    }
    std::filesystem::rename(tmp, path);
}

// index-ordered parallel map: results land by index, not completion order
inline void parallel_for(std::size_t count, int workers,
                         const std::function<void(std::size_t)>& fn) {
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errs(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < count; i += workers) fn(i);
            } catch (...) {
                errs[w] = std::current_exception();
            }
        });
    for (auto& t : pool) t.join();
    for (auto& e : errs)
        if (e) std::rethrow_exception(e);
}

}  // namespace cli
