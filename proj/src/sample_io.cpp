#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>

#include "georel/error.hpp"
#include "georel/relcli.hpp"

namespace georel::cli {
namespace {

struct Token {
    std::string_view text;
    int line;
    int column;
};

std::int64_t parse_int(const Token& tok) {
    std::int64_t value = 0;
    const char* first = tok.text.data();
    const char* last = first + tok.text.size();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw ParseError("expected an integer, got '" + std::string(tok.text) + "'", tok.line, tok.column);
    return value;
}

std::vector<Token> tokenize_line(std::string_view line, int line_no) {
    std::vector<Token> out;
    std::size_t i = 0;
    while (i < line.size()) {
        if (line[i] == '#') break;
        if (std::isspace(static_cast<unsigned char>(line[i]))) {
            ++i;
            continue;
        }
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
        out.push_back({line.substr(start, i - start), line_no, static_cast<int>(start) + 1});
    }
    return out;
}

}  // namespace

SampleFile parse_sample_text(std::string_view text) {
    SampleFile out;
    bool seen_content = false;
    int line_no = 0;
    int last_line = 1;
    std::size_t pos = 0;
    std::vector<Token> value_tokens;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        ++line_no;
        pos = end + 1;
        const auto tokens = tokenize_line(line, line_no);
        if (tokens.empty()) {
            if (end == text.size()) break;
            continue;
        }
        last_line = line_no;
        const bool header = !seen_content && tokens.front().text.find('=') != std::string_view::npos;
        seen_content = true;
        if (header) {
            for (const auto& tok : tokens) {
                const auto eq = tok.text.find('=');
                if (eq == std::string_view::npos)
                    throw ParseError("header expects key=value pairs", tok.line, tok.column);
                const auto key = tok.text.substr(0, eq);
                const Token value{tok.text.substr(eq + 1), tok.line, tok.column + static_cast<int>(eq) + 1};
                if (value.text.empty()) throw ParseError("missing value", value.line, value.column);
                if (key == "c")
                    out.c = parse_int(value);
                else if (key == "n")
                    out.n = parse_int(value);
                else
                    throw ParseError("unknown header key '" + std::string(key) + "'", tok.line, tok.column);
            }
            if (!out.c || !out.n) throw ParseError("censored header needs both c= and n=", line_no, 1);
            if (*out.n < 1) throw ParseError("n must be >= 1", line_no, 1);
        } else {
            value_tokens.insert(value_tokens.end(), tokens.begin(), tokens.end());
        }
        if (end == text.size()) break;
    }

    for (const auto& tok : value_tokens) {
        const auto v = parse_int(tok);
        if (v < 0) throw ParseError("lifetimes must be >= 0", tok.line, tok.column);
        if (out.c && v > *out.c)
            throw ParseError("observed failure beyond censoring cycle c", tok.line, tok.column);
        out.values.push_back(v);
    }
    if (out.censored()) {
        if (static_cast<std::int64_t>(out.values.size()) > *out.n)
            throw ParseError("more failures than units on test", last_line, 1);
    } else if (out.values.empty()) {
        throw ParseError("empty sample", std::max(1, line_no), 1);
    }
    return out;
}

SampleFile read_sample_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open '" + path.string() + "'", 0, 0);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_sample_text(buf.str());
}

}  // namespace georel::cli
