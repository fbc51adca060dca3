#include "mvsc/data_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "mvsc/format.hpp"

namespace mvsc {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::ifstream open_input(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void close_output(std::ofstream& out, const fs::path& path) {
    out.close();
    if (!out) throw IoError("failed writing " + path.string());
}

const char* orientation_name(Orientation o) {
    return o == Orientation::FeaturesBySamples ? "features_by_samples" : "samples_by_features";
}

std::string csv_join(const std::vector<std::string>& fields) {
    std::string out;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i) out += ',';
        out += fields[i];
    }
    return out;
}

std::vector<std::string> csv_split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.emplace_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace

DatasetManifest read_manifest(const fs::path& path) {
    std::ifstream in = open_input(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    const fs::path base = path.parent_path();
    auto resolve = [&base](const std::string& p) { return fs::path(p).is_absolute() ? fs::path(p) : base / p; };

    DatasetManifest m;
    try {
        m.name = doc.value("name", path.stem().string());
        const std::string orientation = doc.value("orientation", "features_by_samples");
        if (orientation == "features_by_samples") {
            m.orientation = Orientation::FeaturesBySamples;
        } else if (orientation == "samples_by_features") {
            m.orientation = Orientation::SamplesByFeatures;
        } else {
            throw ParseError(path.string() + ": unknown orientation '" + orientation + "'");
        }
        for (const json& v : doc.at("views")) {
            ViewEntry entry;
            if (v.is_string()) {
                entry.path = resolve(v.get<std::string>());
            } else {
                entry.path = resolve(v.at("path").get<std::string>());
                if (v.contains("features")) entry.features = v.at("features").get<Eigen::Index>();
            }
            m.views.push_back(std::move(entry));
        }
        if (doc.contains("labels") && !doc.at("labels").is_null()) m.labels = resolve(doc.at("labels").get<std::string>());
        if (doc.contains("clusters") && !doc.at("clusters").is_null()) m.clusters = doc.at("clusters").get<int>();
    } catch (const json::exception& e) {
        throw ParseError(path.string() + ": " + e.what());
    }
    if (m.views.empty()) throw ParseError(path.string() + ": manifest lists no views");
    return m;
}

void write_manifest(const DatasetManifest& manifest, const fs::path& path) {
    const fs::path base = path.parent_path();
    auto relative = [&base](const fs::path& p) {
        return (p.is_relative() ? p : fs::relative(p, base)).generic_string();
    };
    json doc;
    doc["name"] = manifest.name;
    doc["orientation"] = orientation_name(manifest.orientation);
    json views = json::array();
    for (const ViewEntry& v : manifest.views) {
        json entry{{"path", relative(v.path)}};
        if (v.features) entry["features"] = *v.features;
        views.push_back(std::move(entry));
    }
    doc["views"] = std::move(views);
    if (manifest.labels) doc["labels"] = relative(*manifest.labels);
    if (manifest.clusters) doc["clusters"] = *manifest.clusters;
    std::ofstream out = open_output(path);
    out << doc.dump(2) << '\n';
    close_output(out, path);
}

MultiViewDataset load_dataset(const DatasetManifest& manifest) {
    MultiViewDataset data;
    for (std::size_t v = 0; v < manifest.views.size(); ++v) {
        Matrix x = read_matrix_csv(manifest.views[v].path);
        if (manifest.orientation == Orientation::SamplesByFeatures) x.transposeInPlace();
        if (manifest.views[v].features && *manifest.views[v].features != x.rows())
            throw DimMismatch(manifest.views[v].path.string() + ": declared " +
                              std::to_string(*manifest.views[v].features) + " features, found " +
                              std::to_string(x.rows()));
        if (!data.views.empty() && x.cols() != data.views.front().cols())
            throw DimMismatch(manifest.views[v].path.string() + ": " + std::to_string(x.cols()) +
                              " samples, first view has " + std::to_string(data.views.front().cols()));
        data.views.push_back(std::move(x));
    }
    if (manifest.labels) {
        const std::vector<std::string> tokens = read_label_tokens(*manifest.labels);
        if (static_cast<Eigen::Index>(tokens.size()) != data.samples())
            throw LabelMismatch(manifest.labels->string() + ": " + std::to_string(tokens.size()) + " labels for " +
                                std::to_string(data.samples()) + " samples");
        int distinct = 0;
        data.labels = remap_labels(tokens, &distinct);
        if (manifest.clusters && *manifest.clusters != distinct)
            throw LabelMismatch("manifest declares " + std::to_string(*manifest.clusters) + " clusters, labels have " +
                                std::to_string(distinct));
        data.clusters = distinct;
    } else if (manifest.clusters) {
        data.clusters = manifest.clusters;
    }
    data.validate();
    return data;
}

MultiViewDataset load_dataset(const fs::path& manifest_path) { return load_dataset(read_manifest(manifest_path)); }

Matrix read_matrix_csv(const fs::path& path) {
    std::ifstream in = open_input(path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string_view body = trim(line);
        if (body.empty()) continue;
        std::vector<double> row;
        std::size_t start = 0;
        while (true) {
            const std::size_t comma = body.find(',', start);
            const std::string_view cell =
                trim(body.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
            double value = 0.0;
            const char* first = cell.data();
            if (!cell.empty() && cell.front() == '+') ++first;
            const auto res = std::from_chars(first, cell.data() + cell.size(), value);
            if (cell.empty() || res.ec != std::errc{} || res.ptr != cell.data() + cell.size() || !std::isfinite(value))
                throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad cell '" + std::string(cell) + "'");
            row.push_back(value);
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(rows.front().size()) + " cells, found " + std::to_string(row.size()));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path.string() + ": no data");
    Matrix m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return m;
}

void write_matrix_csv(const Matrix& m, const fs::path& path) {
    std::ofstream out = open_output(path);
    std::string line;
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        line.clear();
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (j) line += ',';
            line += format_number(m(i, j));
        }
        line += '\n';
        out << line;
    }
    close_output(out, path);
}

std::vector<std::string> read_label_tokens(const fs::path& path) {
    std::ifstream in = open_input(path);
    std::vector<std::string> tokens;
    std::string line;
    while (std::getline(in, line)) {
        const std::string_view t = trim(line);
        if (!t.empty()) tokens.emplace_back(t);
    }
    return tokens;
}

Labels read_labels(const fs::path& path) { return remap_labels(read_label_tokens(path)); }

void write_labels(std::span<const int> labels, const fs::path& path) {
    std::ofstream out = open_output(path);
    for (int l : labels) out << l << '\n';
    close_output(out, path);
}

Labels remap_labels(const std::vector<std::string>& tokens, int* clusters) {
    std::vector<long long> numeric;
    numeric.reserve(tokens.size());
    bool all_integer = true;
    for (const std::string& t : tokens) {
        long long value = 0;
        const auto res = std::from_chars(t.data(), t.data() + t.size(), value);
        if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
            all_integer = false;
            break;
        }
        numeric.push_back(value);
    }

    Labels out;
    out.reserve(tokens.size());
    if (all_integer) {
        std::map<long long, int> ids;
        for (long long x : numeric) ids.emplace(x, 0);
        int next = 0;
        for (auto& [key, id] : ids) id = next++;
        for (long long x : numeric) out.push_back(ids.at(x));
        if (clusters) *clusters = next;
    } else {
        std::map<std::string, int> ids;
        for (const std::string& t : tokens) ids.emplace(t, 0);
        int next = 0;
        for (auto& [key, id] : ids) id = next++;
        for (const std::string& t : tokens) out.push_back(ids.at(t));
        if (clusters) *clusters = next;
    }
    return out;
}

void standardize_features(MultiViewDataset& data) {
    for (Matrix& x : data.views) {
        const Vector mean = x.rowwise().mean();
        x.colwise() -= mean;
        if (x.cols() < 2) continue;
        const Vector sd = (x.rowwise().squaredNorm() / static_cast<double>(x.cols() - 1)).cwiseSqrt();
        for (Eigen::Index i = 0; i < x.rows(); ++i)
            if (sd(i) > 0.0) x.row(i) /= sd(i);
    }
}

void unit_norm_samples(MultiViewDataset& data) {
    for (Matrix& x : data.views)
        for (Eigen::Index j = 0; j < x.cols(); ++j) {
            const double n = x.col(j).norm();
            if (n > 0.0) x.col(j) /= n;
        }
}

void write_dataset(const MultiViewDataset& data, const fs::path& dir, const std::string& name) {
    fs::create_directories(dir);
    DatasetManifest manifest;
    manifest.name = name;
    for (std::size_t v = 0; v < data.views.size(); ++v) {
        const std::string file = "view_" + std::to_string(v + 1) + ".csv";
        write_matrix_csv(data.views[v], dir / file);
        manifest.views.push_back({file, data.views[v].rows()});
    }
    if (data.labels) {
        write_labels(*data.labels, dir / "labels.txt");
        manifest.labels = "labels.txt";
    }
    manifest.clusters = data.clusters;
    write_manifest(manifest, dir / "manifest.json");
}

const std::vector<std::string>& metrics_csv_header() {
    static const std::vector<std::string> header = [] {
        std::vector<std::string> h{"algorithm", "converged", "iterations", "clusters", "standardize", "unit_norm"};
        const auto& m = MetricReport::csv_header();
        h.insert(h.end(), m.begin(), m.end());
        return h;
    }();
    return header;
}

void save_result(const ClusteringResult& result, const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + dir.string() + ": " + ec.message());

    std::vector<std::string> row{result.algorithm,
                                 result.converged ? "true" : "false",
                                 std::to_string(result.iterations),
                                 std::to_string(result.clusters),
                                 result.preprocessing.standardize ? "true" : "false",
                                 result.preprocessing.unit_norm ? "true" : "false"};
    for (std::size_t i = 0; i < MetricReport::csv_header().size(); ++i) row.emplace_back();
    if (result.metrics) {
        const std::vector<double> values = result.metrics->csv_values();
        for (std::size_t i = 0; i < values.size(); ++i) row[6 + i] = format_number(values[i]);
    }
    {
        const fs::path path = dir / "metrics.csv";
        std::ofstream out = open_output(path);
        out << csv_join(metrics_csv_header()) << '\n' << csv_join(row) << '\n';
        close_output(out, path);
    }
    write_labels(result.labels, dir / "labels.txt");
    {
        const fs::path path = dir / "trace.csv";
        std::ofstream out = open_output(path);
        result.trace.write_csv(out);
        close_output(out, path);
    }
    if (result.adjacency) write_matrix_csv(result.adjacency->matrix(), dir / "adjacency.csv");
}

std::vector<std::pair<std::string, std::string>> read_metrics_row(const fs::path& path) {
    std::ifstream in = open_input(path);
    std::string header, row;
    if (!std::getline(in, header) || !std::getline(in, row)) throw ParseError(path.string() + ": expected two lines");
    const std::vector<std::string> keys = csv_split(header);
    const std::vector<std::string> values = csv_split(row);
    if (keys.size() != values.size()) throw ParseError(path.string() + ": header and row differ in width");
    std::vector<std::pair<std::string, std::string>> out;
    for (std::size_t i = 0; i < keys.size(); ++i) out.emplace_back(keys[i], values[i]);
    return out;
}

ResidualTrace read_trace(const fs::path& path) {
    std::ifstream in = open_input(path);
    std::string line;
    if (!std::getline(in, line)) throw ParseError(path.string() + ": empty trace");
    const std::vector<std::string> header = csv_split(line);
    if (header.size() < 3 || header.front() != "iteration") throw ParseError(path.string() + ": bad trace header");
    ResidualTrace trace;
    trace.names.assign(header.begin() + 1, header.end() - 2);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> cells = csv_split(line);
        if (cells.size() != header.size()) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad width");
        auto number = [&](const std::string& s) {
            double x = 0.0;
            const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
            if (res.ec != std::errc{}) throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad number");
            return x;
        };
        TraceRecord r;
        r.iteration = static_cast<int>(number(cells.front()));
        for (std::size_t i = 1; i + 2 < cells.size(); ++i) r.criteria.push_back(number(cells[i]));
        r.mu = number(cells[cells.size() - 2]);
        r.elapsed_ms = number(cells.back());
        trace.records.push_back(std::move(r));
    }
    return trace;
}

} // namespace mvsc
