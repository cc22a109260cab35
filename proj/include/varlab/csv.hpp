#pragma once

#include <cstdio>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace varlab {

// 17 significant digits round-trip a double exactly.
inline std::string format_double17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// Minimal CSV emitter: '#'-prefixed metadata comments, a mandatory header,
// then plain comma-joined rows. Output is a pure function of what the
// caller feeds in, which is what makes files replayable byte-for-byte.
class CsvWriter {
public:
    explicit CsvWriter(std::ostream& os) : os_(os) {}

    void comment(std::string_view line) { os_ << "# " << line << "\n"; }

    void header(std::span<const std::string_view> columns) { line(columns); }

    void row(std::span<const std::string> cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ",";
            os_ << cells[i];
        }
        os_ << "\n";
    }

private:
    void line(std::span<const std::string_view> cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) os_ << ",";
            os_ << cells[i];
        }
        os_ << "\n";
    }

    std::ostream& os_;
};

} // namespace varlab
