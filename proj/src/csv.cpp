#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "georel/relcli.hpp"

namespace georel::cli {

std::string format_number(double value) {
    if (std::isnan(value)) return "nan";
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    if (ec != std::errc()) throw std::runtime_error("format_number: conversion failed");
    return std::string(buf, ptr);
}

double parse_number(std::string_view text) {
    if (text == "nan") return std::nan("");
    if (text == "inf") return INFINITY;
    if (text == "-inf") return -INFINITY;
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc() || ptr != text.data() + text.size())
        throw std::invalid_argument("not a number: '" + std::string(text) + "'");
    return value;
}

namespace {

std::vector<std::string> split_fields(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma == std::string_view::npos ? line.npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

void write_fields(std::ostream& out, const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (fields[i].find_first_of(",\n") != std::string::npos)
            throw std::invalid_argument("CSV field contains a separator: " + fields[i]);
        out << (i ? "," : "") << fields[i];
    }
    out << '\n';
}

}  // namespace

std::string CsvDocument::render() const {
    std::ostringstream out;
    for (const auto& m : metadata) out << "# " << m << '\n';
    write_fields(out, header);
    for (const auto& row : rows) write_fields(out, row);
    return out.str();
}

CsvDocument CsvDocument::parse(std::string_view text) {
    CsvDocument doc;
    bool have_header = false;
    std::size_t pos = 0;
    while (pos < text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        if (line.empty()) continue;
        if (line.front() == '#') {
            line.remove_prefix(1);
            if (!line.empty() && line.front() == ' ') line.remove_prefix(1);
            doc.metadata.emplace_back(line);
        } else if (!have_header) {
            doc.header = split_fields(line);
            have_header = true;
        } else {
            doc.rows.push_back(split_fields(line));
        }
    }
    return doc;
}

}  // namespace georel::cli
