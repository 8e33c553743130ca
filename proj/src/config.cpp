#include "edpmc/config.hpp"

#include <json.hpp>

#include <fstream>

namespace edpmc {

namespace {

using nlohmann::json;

void reject_unknown(const json& object, std::initializer_list<const char*> known,
                    const std::string& scope) {
    for (const auto& [key, value] : object.items()) {
        (void)value;
        bool ok = false;
        for (const char* k : known)
            if (key == k) ok = true;
        if (!ok) throw DataError("config: unknown key '" + scope + key + "'");
    }
}

VectorXd vector_from(const json& array, const std::string& what) {
    if (!array.is_array()) throw DataError("config: '" + what + "' must be an array");
    VectorXd out(static_cast<Index>(array.size()));
    Index i = 0;
    for (const auto& v : array) out[i++] = v.get<double>();
    return out;
}

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("config: cannot open '" + path.string() + "'");
    json data;
    try {
        in >> data;
    } catch (const json::parse_error& error) {
        throw DataError("config: '" + path.string() + "': " + error.what());
    }
    return data;
}

StructureModel model_from(const json& object) {
    reject_unknown(object,
                   {"story_masses_kg", "story_stiffnesses_n_per_m", "yield_drifts_m",
                    "story_height_m"},
                   "model.");
    if (!object.contains("story_masses_kg") || !object.contains("story_stiffnesses_n_per_m") ||
        !object.contains("yield_drifts_m") || !object.contains("story_height_m"))
        throw DataError("config: model needs story_masses_kg, story_stiffnesses_n_per_m, "
                        "yield_drifts_m and story_height_m");
    return StructureModel(vector_from(object["story_masses_kg"], "story_masses_kg"),
                          vector_from(object["story_stiffnesses_n_per_m"],
                                      "story_stiffnesses_n_per_m"),
                          vector_from(object["yield_drifts_m"], "yield_drifts_m"),
                          object["story_height_m"].get<double>());
}

ExperimentConfig config_from(const json& data) {
    reject_unknown(data,
                   {"n_records", "n_materials", "cr_grid", "trials", "methods", "seed",
                    "threads", "completion", "regression", "cluster", "material_cov",
                    "model"},
                   "");
    ExperimentConfig config;
    if (data.contains("n_records")) config.n_records = data["n_records"].get<int>();
    if (data.contains("n_materials")) config.n_materials = data["n_materials"].get<int>();
    if (data.contains("cr_grid")) {
        config.cr_grid.clear();
        for (const auto& v : data["cr_grid"]) config.cr_grid.push_back(v.get<double>());
    }
    if (data.contains("trials")) config.trials = data["trials"].get<int>();
    if (data.contains("methods")) {
        config.methods.clear();
        for (const auto& v : data["methods"])
            config.methods.push_back(mask_method_from_string(v.get<std::string>()));
    }
    if (data.contains("seed")) config.master_seed = data["seed"].get<std::uint64_t>();
    if (data.contains("threads")) config.threads = data["threads"].get<int>();
    if (data.contains("completion")) {
        const auto& c = data["completion"];
        reject_unknown(c, {"rank", "lambda", "tolerance", "max_sweeps", "restarts"},
                       "completion.");
        if (c.contains("rank")) config.completion.rank = c["rank"].get<Index>();
        if (c.contains("lambda")) config.completion.lambda = c["lambda"].get<double>();
        if (c.contains("tolerance")) config.completion.tolerance = c["tolerance"].get<double>();
        if (c.contains("max_sweeps")) config.completion.max_sweeps = c["max_sweeps"].get<int>();
        if (c.contains("restarts")) config.completion.restarts = c["restarts"].get<int>();
    }
    if (data.contains("regression")) {
        const auto& r = data["regression"];
        reject_unknown(r, {"model", "lambda", "bandwidth"}, "regression.");
        if (r.contains("model"))
            config.regression.model = regression_model_from_string(r["model"].get<std::string>());
        if (r.contains("lambda")) config.regression.lambda = r["lambda"].get<double>();
        if (r.contains("bandwidth")) config.regression.bandwidth = r["bandwidth"].get<double>();
    }
    if (data.contains("cluster")) {
        const auto& c = data["cluster"];
        reject_unknown(c, {"k", "distance"}, "cluster.");
        if (c.contains("k")) config.cluster_k = c["k"].get<Index>();
        if (c.contains("distance"))
            config.cluster_distance = distance_from_string(c["distance"].get<std::string>());
    }
    if (data.contains("material_cov"))
        config.material_cov = vector_from(data["material_cov"], "material_cov");
    if (data.contains("model")) config.model = model_from(data["model"]);
    config.validate();
    return config;
}

}  // namespace

ExperimentConfig experiment_config_from_json_text(const std::string& text) {
    json data;
    try {
        data = json::parse(text);
    } catch (const json::parse_error& error) {
        throw DataError(std::string("config: ") + error.what());
    }
    return config_from(data);
}

ExperimentConfig experiment_config_from_json_file(const std::filesystem::path& path) {
    return config_from(read_json(path));
}

std::string experiment_config_to_json(const ExperimentConfig& config) {
    json data;
    data["n_records"] = config.n_records;
    data["n_materials"] = config.n_materials;
    data["cr_grid"] = config.cr_grid;
    data["trials"] = config.trials;
    std::vector<std::string> methods;
    for (MaskMethod m : config.methods) methods.push_back(to_string(m));
    data["methods"] = methods;
    data["seed"] = config.master_seed;
    data["completion"] = {{"rank", config.completion.rank},
                          {"lambda", config.completion.lambda},
                          {"tolerance", config.completion.tolerance},
                          {"max_sweeps", config.completion.max_sweeps},
                          {"restarts", config.completion.restarts}};
    data["regression"] = {{"model", to_string(config.regression.model)},
                          {"lambda", config.regression.lambda},
                          {"bandwidth", config.regression.bandwidth}};
    data["cluster"] = {{"k", config.effective_k()},
                       {"distance", to_string(config.cluster_distance)}};
    const StructureModel& model = config.effective_model();
    const VectorXd cov = config.material_cov.size() > 0
                             ? config.material_cov
                             : default_material_cov(model.stories());
    data["material_cov"] = std::vector<double>(cov.data(), cov.data() + cov.size());
    data["model"] = {
        {"story_masses_kg",
         std::vector<double>(model.masses().data(), model.masses().data() + model.stories())},
        {"story_stiffnesses_n_per_m",
         std::vector<double>(model.stiffnesses().data(),
                             model.stiffnesses().data() + model.stories())},
        {"yield_drifts_m",
         std::vector<double>(model.yield_drifts().data(),
                             model.yield_drifts().data() + model.stories())},
        {"story_height_m", model.story_height()}};
    return data.dump();  // nlohmann orders keys, so the dump is canonical
}

StructureModel structure_model_from_json_text(const std::string& text) {
    json data;
    try {
        data = json::parse(text);
    } catch (const json::parse_error& error) {
        throw DataError(std::string("config: ") + error.what());
    }
    return model_from(data);
}

StructureModel structure_model_from_json_file(const std::filesystem::path& path) {
    return model_from(read_json(path));
}

std::string config_fingerprint(const ExperimentConfig& config) {
    const std::string canonical = experiment_config_to_json(config);
    std::uint64_t hash = 0xcbf29ce484222325ULL;  // FNV-1a 64
    for (unsigned char c : canonical) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    char buffer[20];
    std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
    return buffer;
}

}  // namespace edpmc

