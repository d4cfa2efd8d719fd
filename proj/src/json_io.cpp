#include "renyilab/json_io.hpp"

#include <fstream>
#include <sstream>

#include "renyilab/errors.hpp"

namespace renyi {

namespace {

Json entries_to_json(const Mat& m) {
    Json rows = Json::array();
    for (long i = 0; i < m.rows(); ++i) {
        Json row = Json::array();
        for (long j = 0; j < m.cols(); ++j)
            row.push_back(Json::array({m(i, j).real(), m(i, j).imag()}));
        rows.push_back(std::move(row));
    }
    return rows;
}

Mat entries_from_json(const Json& rows) {
    const long r = static_cast<long>(rows.size());
    if (r == 0) throw Error("json: empty matrix");
    const long c = static_cast<long>(rows[0].size());
    Mat m(r, c);
    for (long i = 0; i < r; ++i) {
        if (static_cast<long>(rows[i].size()) != c) throw Error("json: ragged matrix");
        for (long j = 0; j < c; ++j)
            m(i, j) = cxd(rows[i][j][0].get<double>(), rows[i][j][1].get<double>());
    }
    return m;
}

} // namespace

Json complex_matrix_to_json(const Mat& m) { return entries_to_json(m); }

Mat complex_matrix_from_json(const Json& j) {
    return entries_from_json(j.contains("matrix") ? j["matrix"] : j);
}

Json state_to_json(const DensityOperator& rho) {
    Json j;
    j["dims"] = rho.shape.dims;
    j["labels"] = rho.shape.labels;
    j["matrix"] = entries_to_json(rho.rho);
    return j;
}

DensityOperator state_from_json(const Json& j) {
    std::vector<int> dims = j.at("dims").get<std::vector<int>>();
    std::vector<std::string> labels;
    if (j.contains("labels")) {
        labels = j.at("labels").get<std::vector<std::string>>();
    } else {
        for (std::size_t i = 0; i < dims.size(); ++i)
            labels.push_back("S" + std::to_string(i));
    }
    return DensityOperator(entries_from_json(j.at("matrix")),
                           SubsystemShape(dims, labels));
}

Json ensemble_to_json(const std::vector<double>& probs,
                      const std::vector<DensityOperator>& states) {
    Json j;
    j["probs"] = probs;
    Json arr = Json::array();
    for (const auto& s : states) arr.push_back(state_to_json(s));
    j["states"] = std::move(arr);
    return j;
}

std::pair<std::vector<double>, std::vector<DensityOperator>> ensemble_from_json(
    const Json& j) {
    std::vector<double> probs = j.at("probs").get<std::vector<double>>();
    std::vector<DensityOperator> states;
    for (const auto& s : j.at("states")) states.push_back(state_from_json(s));
    return {std::move(probs), std::move(states)};
}

Json channel_to_json(const QuantumChannel& n) {
    Json j;
    j["d_in"] = n.d_in;
    j["d_out"] = n.d_out;
    Json ks = Json::array();
    for (const Mat& k : n.kraus) ks.push_back(entries_to_json(k));
    j["kraus"] = std::move(ks);
    return j;
}

QuantumChannel channel_from_json(const Json& j) {
    std::vector<Mat> ks;
    for (const auto& k : j.at("kraus")) ks.push_back(entries_from_json(k));
    QuantumChannel n(std::move(ks));
    if (j.contains("d_in") && j.at("d_in").get<int>() != n.d_in)
        throw InvalidChannel("channel json: d_in mismatch");
    if (j.contains("d_out") && j.at("d_out").get<int>() != n.d_out)
        throw InvalidChannel("channel json: d_out mismatch");
    return n;
}

Json povm_to_json(const Povm& p) {
    Json j;
    j["dim"] = p.dim;
    j["rank_one"] = p.rank_one;
    Json es = Json::array();
    for (const Mat& e : p.effects) es.push_back(entries_to_json(e));
    j["effects"] = std::move(es);
    return j;
}

Povm povm_from_json(const Json& j) {
    std::vector<Mat> es;
    for (const auto& e : j.at("effects")) es.push_back(entries_from_json(e));
    return Povm(std::move(es));
}

Json measure_result_to_json(const MeasureResult& r) {
    Json j;
    j["value"] = r.value;
    j["bound"] = r.upper_bound ? "upper" : "exact";
    j["converged"] = r.converged;
    j["evaluations"] = r.evaluations;
    j["feasibility_residual"] = r.feasibility_residual;
    if (r.extension_isometry) j["extension_isometry"] = entries_to_json(*r.extension_isometry);
    if (r.measurement) j["povm"] = povm_to_json(*r.measurement);
    if (r.ensemble) {
        Json dec;
        dec["probs"] = r.ensemble->probs;
        Json vecs = Json::array();
        for (const Vec& v : r.ensemble->vectors) {
            Json arr = Json::array();
            for (long i = 0; i < v.size(); ++i)
                arr.push_back(Json::array({v(i).real(), v(i).imag()}));
            vecs.push_back(std::move(arr));
        }
        dec["states"] = std::move(vecs);
        j["argmin_ensemble"] = std::move(dec);
    }
    return j;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + path);
    out << content;
}

Json read_json_file(const std::string& path) {
    return Json::parse(read_text_file(path));
}

} // namespace renyi
