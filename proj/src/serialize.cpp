#include "macregion/serialize.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace macregion::io {

namespace {

std::string_view trim_cr(std::string_view line)
{
    if (!line.empty() && line.back() == '\r')
        line.remove_suffix(1);
    return line;
}

std::vector<std::string_view> split_lines(std::string_view text)
{
    std::vector<std::string_view> lines;
    while (!text.empty()) {
        const auto nl = text.find('\n');
        lines.push_back(trim_cr(text.substr(0, nl)));
        if (nl == std::string_view::npos)
            break;
        text.remove_prefix(nl + 1);
    }
    return lines;
}

Json rate_check_json(const mc::RateCheck& c)
{
    Json j;
    j["estimate"] = c.estimate.value;
    j["std_error"] = c.estimate.std_error;
    j["analytic"] = c.analytic;
    j["tolerance"] = c.tolerance;
    j["pass"] = c.pass;
    return j;
}

Json estimate_json(const mc::MiEstimate& e)
{
    Json j;
    j["estimate"] = e.value;
    j["std_error"] = e.std_error;
    return j;
}

} // namespace

OutputFormat parse_format(std::string_view name)
{
    if (name == "json")
        return OutputFormat::json;
    if (name == "csv")
        return OutputFormat::csv;
    throw ConfigError("unknown output format: " + std::string(name));
}

std::string format_number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return {buf, res.ptr};
}

double parse_number(std::string_view text)
{
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw DomainError("malformed number: " + std::string(text));
    return v;
}

std::string frontier_csv(const Frontier<double>& f)
{
    std::string out = "r1,r2\n";
    for (Eigen::Index i = 0; i < f.size(); ++i)
        out += format_number(f.points()(i, 0)) + "," + format_number(f.points()(i, 1)) + "\n";
    return out;
}

Frontier<double> parse_frontier_csv(std::string_view text)
{
    const auto lines = split_lines(text);
    if (lines.empty() || lines.front() != "r1,r2")
        throw DomainError("frontier csv must start with the header r1,r2");
    std::vector<Point2<double>> pts;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        if (lines[i].empty())
            continue;
        const auto comma = lines[i].find(',');
        if (comma == std::string_view::npos)
            throw DomainError("frontier csv row needs two fields");
        pts.emplace_back(parse_number(lines[i].substr(0, comma)), parse_number(lines[i].substr(comma + 1)));
    }
    PointList<double> m(static_cast<Eigen::Index>(pts.size()), 2);
    for (std::size_t i = 0; i < pts.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = pts[i].transpose();
    return Frontier<double>(std::move(m));
}

Json frontier_json(const Json& manifest, std::string_view scheme, const Frontier<double>& f)
{
    Json doc;
    doc["manifest"] = manifest;
    doc["scheme"] = scheme;
    Json points = Json::array();
    for (Eigen::Index i = 0; i < f.size(); ++i)
        points.push_back({f.points()(i, 0), f.points()(i, 1)});
    doc["points"] = std::move(points);
    return doc;
}

Frontier<double> parse_frontier_json(std::string_view text)
{
    const auto doc = Json::parse(text.begin(), text.end());
    const auto& points = doc.at("points");
    PointList<double> m(static_cast<Eigen::Index>(points.size()), 2);
    for (std::size_t i = 0; i < points.size(); ++i) {
        m(static_cast<Eigen::Index>(i), 0) = points[i].at(0).get<double>();
        m(static_cast<Eigen::Index>(i), 1) = points[i].at(1).get<double>();
    }
    return Frontier<double>(std::move(m));
}

std::string region_csv(const Region<double>& r)
{
    std::string out = "kind,x,y,b\n";
    for (Eigen::Index i = 0; i < r.halfspace_count(); ++i) {
        const auto h = r.halfspace(i);
        out += "halfspace," + format_number(h.a1) + "," + format_number(h.a2) + "," + format_number(h.b) + "\n";
    }
    for (Eigen::Index i = 0; i < r.vertices().rows(); ++i)
        out += "vertex," + format_number(r.vertices()(i, 0)) + "," + format_number(r.vertices()(i, 1)) + ",\n";
    return out;
}

Json region_json(const Json& manifest, const Region<double>& r)
{
    Json doc;
    doc["manifest"] = manifest;
    doc["scheme"] = "sc";
    Json halfspaces = Json::array();
    for (Eigen::Index i = 0; i < r.halfspace_count(); ++i) {
        const auto h = r.halfspace(i);
        Json row;
        row["a1"] = h.a1;
        row["a2"] = h.a2;
        row["b"] = h.b;
        halfspaces.push_back(std::move(row));
    }
    Json vertices = Json::array();
    for (Eigen::Index i = 0; i < r.vertices().rows(); ++i)
        vertices.push_back({r.vertices()(i, 0), r.vertices()(i, 1)});
    doc["halfspaces"] = std::move(halfspaces);
    doc["vertices"] = std::move(vertices);
    return doc;
}

std::string equivalence_csv(const EquivalenceReport<double>& r)
{
    std::ostringstream out;
    out << "field,value\n"
        << "sum_capacity," << format_number(r.sum_capacity) << "\n"
        << "hausdorff_sc_td," << format_number(r.sc_td) << "\n"
        << "hausdorff_sc_fd," << format_number(r.sc_fd) << "\n"
        << "hausdorff_td_fd," << format_number(r.td_fd) << "\n"
        << "tolerance," << format_number(r.tolerance) << "\n"
        << "verdict," << (r.verdict ? "true" : "false") << "\n";
    return out.str();
}

Json equivalence_json(const Json& manifest, const EquivalenceReport<double>& r)
{
    Json doc;
    doc["manifest"] = manifest;
    doc["scheme"] = "sum-power";
    doc["sum_capacity"] = r.sum_capacity;
    doc["pairwise_hausdorff"] = {{"sc_td", r.sc_td}, {"sc_fd", r.sc_fd}, {"td_fd", r.td_fd}};
    doc["tolerance"] = r.tolerance;
    doc["verdict"] = r.verdict;
    return doc;
}

std::string validation_csv(const mc::SicValidationReport& r)
{
    std::ostringstream out;
    out << "quantity,estimate,std_error,analytic,tolerance,pass\n";
    const std::pair<const char*, const mc::RateCheck*> rows[] = {{"user1_after_cancel", &r.user1_after_cancel},
                                                                 {"user2_with_interference", &r.user2_with_interference},
                                                                 {"joint", &r.joint}};
    for (const auto& [name, c] : rows) {
        out << name << "," << format_number(c->estimate.value) << "," << format_number(c->estimate.std_error) << ","
            << format_number(c->analytic) << "," << format_number(c->tolerance) << "," << (c->pass ? "true" : "false")
            << "\n";
    }
    out << "chain_gap," << format_number(r.chain_gap) << ",,0," << format_number(r.chain_tolerance) << ","
        << (r.chain_pass ? "true" : "false") << "\n";
    if (r.has_knn) {
        const std::pair<const char*, const mc::MiEstimate*> knn[] = {
            {"knn_user1_after_cancel", &r.knn_user1_after_cancel},
            {"knn_user2_with_interference", &r.knn_user2_with_interference},
            {"knn_joint", &r.knn_joint}};
        for (const auto& [name, e] : knn)
            out << name << "," << format_number(e->value) << "," << format_number(e->std_error) << ",,,\n";
        out << "knn_agreement," << format_number(r.knn_max_gap) << ",,,," << (r.knn_pass ? "true" : "false") << "\n";
    }
    out << "passed,,,,," << (r.passed ? "true" : "false") << "\n";
    return out.str();
}

Json validation_json(const Json& manifest, const mc::SicValidationReport& r)
{
    Json doc;
    doc["manifest"] = manifest;
    doc["scheme"] = "sic";
    doc["user1_after_cancel"] = rate_check_json(r.user1_after_cancel);
    doc["user2_with_interference"] = rate_check_json(r.user2_with_interference);
    doc["joint"] = rate_check_json(r.joint);
    doc["chain"] = {{"gap", r.chain_gap}, {"tolerance", r.chain_tolerance}, {"pass", r.chain_pass}};
    if (r.has_knn) {
        Json knn;
        knn["user1_after_cancel"] = estimate_json(r.knn_user1_after_cancel);
        knn["user2_with_interference"] = estimate_json(r.knn_user2_with_interference);
        knn["joint"] = estimate_json(r.knn_joint);
        knn["max_gap_to_plugin"] = r.knn_max_gap;
        knn["pass"] = r.knn_pass;
        doc["knn"] = std::move(knn);
    }
    doc["passed"] = r.passed;
    doc["note"] = r.scope_note;
    return doc;
}

} // namespace macregion::io
