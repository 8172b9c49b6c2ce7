#pragma once

// Versioned CSV emission. Every file starts with
//   # schema=<name>/<version>
//   # generated=<UTC timestamp>
// followed by the column header; re-running a config reproduces the file
// byte-identically apart from the timestamp line.

#include <cstdio>
#include <ctime>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace mixlap {

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::string& schema, int version,
              const std::vector<std::string>& columns)
        : os_(path) {
        if (!os_) throw std::runtime_error("CsvWriter: cannot open " + path);
        os_ << "# schema=" << schema << "/" << version << "\n";
        os_ << "# generated=" << utc_timestamp() << "\n";
        for (std::size_t i = 0; i < columns.size(); ++i)
            os_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        n_cols_ = columns.size();
    }

    static std::string cell(double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        return buf;
    }
    static std::string cell(int v) { return std::to_string(v); }
    static std::string cell(bool v) { return v ? "1" : "0"; }
    static std::string cell(const std::string& v) { return v; }
    static std::string cell(const char* v) { return v; }

    template <typename... Cells>
    void row(const Cells&... cells) {
        std::vector<std::string> r{cell(cells)...};
        if (r.size() != n_cols_) throw std::logic_error("CsvWriter: column count mismatch");
        for (std::size_t i = 0; i < r.size(); ++i)
            os_ << r[i] << (i + 1 < r.size() ? "," : "\n");
    }

    static std::string utc_timestamp() {
        std::time_t t = std::time(nullptr);
        std::tm tm{};
        gmtime_r(&t, &tm);
        char buf[32];
        std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
        return buf;
    }

private:
    std::ofstream os_;
    std::size_t n_cols_ = 0;
};

}  // namespace mixlap
