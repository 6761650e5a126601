#include "corrsamp/archive.hpp"

#include <cmath>
#include <fstream>

#include <json.hpp>

#include "corrsamp/seeding.hpp"
#include "corrsamp/signal_model.hpp"

namespace corrsamp {

using nlohmann::json;

namespace {

constexpr const char* kFormat = "corrsamp-measurements";
constexpr int kVersion = 1;

json matrix_rows(const Matrix& A) {
    json out = json::array();
    for (Index i = 0; i < A.rows(); ++i) {
        json row = json::array();
        for (Index j = 0; j < A.cols(); ++j) row.push_back(A(i, j));
        out.push_back(std::move(row));
    }
    return out;
}

Matrix rows_matrix(const json& j, Index rows, Index cols, const char* what) {
    if (!j.is_array() || static_cast<Index>(j.size()) != rows)
        throw DimensionError(std::string("archive: ") + what + " has the wrong number of rows");
    Matrix A(rows, cols);
    for (Index i = 0; i < rows; ++i) {
        const json& row = j[i];
        if (!row.is_array() || static_cast<Index>(row.size()) != cols)
            throw DimensionError(std::string("archive: ") + what + " has the wrong number of columns");
        for (Index k = 0; k < cols; ++k) A(i, k) = row[k].get<double>();
    }
    return A;
}

json diversifier_block(const DiversifierSet& div) {
    json d = json::object();
    if (div.mask) d["mask"] = div.mask->sets;
    if (div.bank) d["signs"] = matrix_rows(div.bank->signs);
    if (div.mixer) d["mixer"] = matrix_rows(div.mixer->A);
    if (div.filter) {
        std::vector<double> re, im;
        for (Index k = 0; k < div.filter->width(); ++k) {
            re.push_back(div.filter->gains(k).real());
            im.push_back(div.filter->gains(k).imag());
        }
        d["filter_re"] = re;
        d["filter_im"] = im;
    }
    return d;
}

} // namespace

void write_archive(std::ostream& os, const MeasurementArchive& ar) {
    const MeasurementRecord& rec = ar.record;
    const MeasurementOperator op(rec.op);
    json j;
    j["format"] = kFormat;
    j["version"] = kVersion;
    j["operator"] = {{"arch", to_string(rec.op.arch)},
                     {"M", rec.op.M},
                     {"W", rec.op.W},
                     {"omega", rec.op.Omega},
                     {"seed", rec.op.seed}};
    j["diversifiers"] = diversifier_block(op.diversifiers());
    if (ar.ensemble)
        j["ensemble"] = {{"kind", to_string(ar.ensemble->kind)},
                         {"R", ar.ensemble->R},
                         {"burst_len", ar.ensemble->burst_len},
                         {"seed", ar.ensemble->seed}};
    else
        j["ensemble"] = nullptr;
    if (rec.noise)
        j["noise"] = {{"sigma", rec.noise->sigma}, {"delta", rec.noise->delta}, {"seed", rec.noise->seed}};
    else
        j["noise"] = nullptr;
    j["y"] = std::vector<double>(rec.y.data(), rec.y.data() + rec.y.size());
    os << j.dump(1) << '\n';
}

MeasurementArchive read_archive(std::istream& in) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw ParameterError(std::string("archive: malformed document: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != kFormat)
            throw ParameterError("archive: unrecognized format tag");
        if (j.at("version").get<int>() != kVersion)
            throw ParameterError("archive: unsupported version");

        MeasurementArchive ar;
        const json& o = j.at("operator");
        OperatorDescriptor& d = ar.record.op;
        d.arch = architecture_from_string(o.at("arch").get<std::string>());
        d.M = o.at("M").get<Index>();
        d.W = o.at("W").get<Index>();
        d.Omega = o.at("omega").get<Index>();
        d.seed = o.at("seed").get<std::uint64_t>();
        const MeasurementOperator op(d);

        const json& dv = j.at("diversifiers");
        const DiversifierSet& div = op.diversifiers();
        bool match = true;
        if (div.mask) match = match && dv.at("mask").get<std::vector<std::vector<Index>>>() == div.mask->sets;
        if (div.bank) match = match && rows_matrix(dv.at("signs"), d.M, d.W, "signs") == div.bank->signs;
        if (div.mixer) match = match && rows_matrix(dv.at("mixer"), d.M, d.M, "mixer") == div.mixer->A;
        if (div.filter) {
            const auto re = dv.at("filter_re").get<std::vector<double>>();
            const auto im = dv.at("filter_im").get<std::vector<double>>();
            match = match && static_cast<Index>(re.size()) == d.W && static_cast<Index>(im.size()) == d.W;
            for (Index k = 0; match && k < d.W; ++k)
                match = div.filter->gains(k) == cplx(re[k], im[k]);
        }
        if (!match) throw ParameterError("archive: stored diversifiers do not match the operator seed");

        if (!j.at("ensemble").is_null()) {
            const json& e = j.at("ensemble");
            EnsembleInfo info;
            info.kind = ensemble_from_string(e.at("kind").get<std::string>());
            info.R = e.at("R").get<Index>();
            info.burst_len = e.at("burst_len").get<Index>();
            info.seed = e.at("seed").get<std::uint64_t>();
            ar.ensemble = info;
        }
        if (!j.at("noise").is_null()) {
            const json& n = j.at("noise");
            ar.record.noise = NoiseInfo{n.at("sigma").get<double>(), n.at("delta").get<double>(),
                                        n.at("seed").get<std::uint64_t>()};
        }
        const auto y = j.at("y").get<std::vector<double>>();
        if (static_cast<Index>(y.size()) != op.measurements())
            throw DimensionError("archive: y has length " + std::to_string(y.size()) + ", expected " +
                                 std::to_string(op.measurements()));
        ar.record.y = Eigen::Map<const Vector>(y.data(), static_cast<Index>(y.size()));
        return ar;
    } catch (const json::exception& e) {
        throw ParameterError(std::string("archive: ") + e.what());
    }
}

void save_archive(const std::string& path, const MeasurementArchive& ar) {
    std::ofstream out(path);
    if (!out) throw ParameterError("cannot write archive '" + path + "'");
    write_archive(out, ar);
}

MeasurementArchive load_archive(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParameterError("cannot open archive '" + path + "'");
    return read_archive(in);
}

MeasurementArchive sample_trial(const TrialSpec& t) {
    const SampleMatrix X0 = trial_ensemble(t);
    const MeasurementOperator op(trial_operator(t));
    MeasurementArchive ar;
    ar.record = acquire(op, X0);
    if (t.snr && std::isfinite(*t.snr))
        ar.record = add_noise(ar.record, sigma_for_snr(ar.record.y, *t.snr), derive_seed(t.seed, "noise"));
    ar.ensemble = EnsembleInfo{t.ensemble, t.R, t.burst_len, derive_seed(t.seed, "ensemble")};
    return ar;
}

SampleMatrix archive_truth(const MeasurementArchive& ar) {
    require(ar.ensemble.has_value(), "archive has no ensemble block");
    const auto& e = *ar.ensemble;
    const auto& d = ar.record.op;
    if (e.kind == Ensemble::Spike) return gen_spike_ensemble(d.M, d.W, e.R, e.burst_len, e.seed);
    return gen_lowrank_gaussian(d.M, d.W, e.R, e.seed);
}

} // namespace corrsamp
