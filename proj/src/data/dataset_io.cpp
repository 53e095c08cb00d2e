#include "hmdrec/data/dataset_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>

#include "hmdrec/data/kv_config.hpp"
#include "hmdrec/error.hpp"

namespace hmdrec::data {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        if (i >= line.size()) break;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
        out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

long long parse_int(std::string_view s, std::size_t line_no, const char* what) {
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw ParseError(line_no, std::string("bad ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

bool is_skippable(std::string_view line) {
    for (char c : line) {
        if (c == '#') return true;
        if (c != ' ' && c != '\t' && c != '\r') return false;
    }
    return true;
}

}  // namespace

std::string format_sample(const TrackingSample& s) {
    std::string line;
    const auto f = s.fields();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) line += ' ';
        line += format_double(f[i]);
    }
    return line;
}

std::optional<TrackingSample> parse_sample_line(std::string_view line, std::size_t line_no) {
    if (is_skippable(line)) return std::nullopt;
    const auto tokens = split_ws(line);
    if (tokens.front() == "trial") return std::nullopt;
    if (tokens.size() != kSampleFieldCount) {
        throw ParseError(line_no, "expected 19 fields, found " + std::to_string(tokens.size()));
    }
    std::array<double, kSampleFieldCount> f{};
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        try {
            f[i] = parse_double(tokens[i]);
        } catch (const ParseError& e) {
            throw ParseError(line_no, std::string("field ") + std::to_string(i + 1) + ": " + e.what());
        }
    }
    return TrackingSample::from_fields(f);
}

void write_dataset(std::span<const Trial> trials, std::ostream& out) {
    out << kDatasetHeader << '\n';
    for (const Trial& t : trials) {
        out << "trial " << t.subject_id << ' ' << model::name_of(t.label) << ' ' << t.trial_index << ' ';
        if (t.onset) {
            out << *t.onset;
        } else {
            out << '-';
        }
        out << ' ' << t.samples.size() << '\n';
        for (const auto& s : t.samples) out << format_sample(s) << '\n';
    }
}

void write_dataset(std::span<const Trial> trials, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_dataset(trials, out);
    if (!out) throw IoError("failed writing " + path.string());
}

std::vector<Trial> read_dataset(std::istream& in) {
    std::vector<Trial> trials;
    std::size_t expected = 0;
    std::size_t line_no = 0;
    std::string line;
    auto check_complete = [&](std::size_t at_line) {
        if (!trials.empty() && trials.back().samples.size() != expected) {
            throw ParseError(at_line, "trial " + std::to_string(trials.size()) + " declares " +
                                          std::to_string(expected) + " samples but has " +
                                          std::to_string(trials.back().samples.size()));
        }
    };
    while (std::getline(in, line)) {
        ++line_no;
        if (line_no == 1) {
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line != kDatasetHeader) {
                throw ParseError(line_no, "expected '" + std::string(kDatasetHeader) + "' header");
            }
            continue;
        }
        if (is_skippable(line)) continue;
        const auto tokens = split_ws(line);
        if (tokens.front() == "trial") {
            check_complete(line_no);
            if (tokens.size() != 6) throw ParseError(line_no, "trial header needs 5 fields");
            Trial t;
            t.subject_id = static_cast<int>(parse_int(tokens[1], line_no, "subject"));
            const auto label = model::parse_label(tokens[2]);
            if (!label || !model::is_valid(*label)) {
                throw ParseError(line_no, "unknown class '" + std::string(tokens[2]) + "'");
            }
            t.label = *label;
            t.trial_index = static_cast<int>(parse_int(tokens[3], line_no, "trial index"));
            if (tokens[4] != "-") {
                const long long onset = parse_int(tokens[4], line_no, "onset");
                if (onset < 0) throw ParseError(line_no, "negative onset");
                t.onset = static_cast<std::size_t>(onset);
            }
            const long long count = parse_int(tokens[5], line_no, "sample count");
            if (count < 0) throw ParseError(line_no, "negative sample count");
            expected = static_cast<std::size_t>(count);
            t.samples.reserve(expected);
            trials.push_back(std::move(t));
            continue;
        }
        if (trials.empty()) throw ParseError(line_no, "sample line before any trial header");
        if (trials.back().samples.size() == expected) {
            throw ParseError(line_no, "more samples than the trial header declares");
        }
        trials.back().samples.push_back(*parse_sample_line(line, line_no));
    }
    check_complete(line_no + 1);
    return trials;
}

std::vector<Trial> read_dataset(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open dataset " + path.string());
    return read_dataset(in);
}

}  // namespace hmdrec::data
