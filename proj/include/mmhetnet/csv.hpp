// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "config.hpp"

namespace mmhetnet::csv {

/// Comma-separated output with LF line endings and shortest round-trip
/// numbers, so identical inputs give byte-identical files.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void header(std::initializer_list<std::string_view> names) {
        std::vector<std::string> cells(names.begin(), names.end());
        row(cells);
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ << ',';
            out_ << escape(cells[i]);
        }
        out_ << '\n';
    }

    static std::string num(double x) { return config::format_number(x); }

    static std::string escape(std::string_view cell) {
        if (cell.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(cell);
        std::string quoted = "\"";
        for (char c : cell) {
            if (c == '"') quoted += "\"\"";
            else if (c == '\n' || c == '\r') quoted += ' ';
            else quoted += c;
        }
        quoted += '"';
        return quoted;
    }

private:
    std::ostream& out_;
};

} // namespace mmhetnet::csv
