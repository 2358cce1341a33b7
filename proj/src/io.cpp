#include "coflow/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

namespace coflow {

using nlohmann::json;

Batch batch_from_json(const std::string& text) {
    json doc = json::parse(text);
    const int M = doc.at("M").get<int>();
    std::vector<double> caps;
    if (doc.contains("capacities")) caps = doc["capacities"].get<std::vector<double>>();
    Fabric fabric(M, std::move(caps));

    std::vector<Coflow> coflows;
    for (const auto& jc : doc.at("coflows")) {
        Coflow c;
        c.id = jc.at("id").get<int>();
        c.release = jc.value("release", 0.0);
        c.weight = jc.value("weight", 1.0);
        c.phi = jc.value("phi", 1.0);
        for (const auto& jf : jc.at("flows")) {
            Flow f;
            f.src = jf.at("src").get<int>();
            f.dst = jf.at("dst").get<int>();
            f.volume = jf.at("vol").get<double>();
            c.flows.push_back(f);
        }
        coflows.push_back(std::move(c));
    }
    return Batch(std::move(fabric), std::move(coflows));
}

std::string batch_to_json(const Batch& batch) {
    json doc;
    doc["M"] = batch.fabric.M;
    doc["capacities"] = batch.fabric.capacities;
    doc["coflows"] = json::array();
    for (const Coflow& c : batch.coflows) {
        json jc;
        jc["id"] = c.id;
        jc["release"] = c.release;
        jc["weight"] = c.weight;
        jc["phi"] = c.phi;
        jc["flows"] = json::array();
        for (const Flow& f : c.flows)
            jc["flows"].push_back(json{{"src", f.src}, {"dst", f.dst}, {"vol", f.volume}});
        doc["coflows"].push_back(std::move(jc));
    }
    return doc.dump(2);
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
        // trim spaces
        const auto b = cell.find_first_not_of(" \t\r");
        const auto e = cell.find_last_not_of(" \t\r");
        out.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
    }
    return out;
}

}  // namespace

Batch batch_from_csv(const std::string& text) {
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) throw model_error("csv: empty input");
    const auto header = split_csv_line(line);
    const std::vector<std::string> expected = {"coflow_id", "src", "dst", "vol",
                                               "release", "weight", "phi"};
    if (header != expected) throw model_error("csv: unexpected header");

    std::map<int, Coflow> by_id;
    std::vector<int> id_order;
    int max_port = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line == "\r") continue;
        const auto cells = split_csv_line(line);
        if (cells.size() != expected.size()) throw model_error("csv: bad row: " + line);
        const int id = std::stoi(cells[0]);
        Flow f;
        f.src = std::stoi(cells[1]);
        f.dst = std::stoi(cells[2]);
        f.volume = std::stod(cells[3]);
        auto [it, inserted] = by_id.try_emplace(id);
        Coflow& c = it->second;
        if (inserted) {
            c.id = id;
            c.release = std::stod(cells[4]);
            c.weight = std::stod(cells[5]);
            c.phi = std::stod(cells[6]);
            id_order.push_back(id);
        } else {
            if (c.release != std::stod(cells[4]) || c.weight != std::stod(cells[5]) ||
                c.phi != std::stod(cells[6]))
                throw model_error("csv: inconsistent attributes for coflow " + cells[0]);
        }
        c.flows.push_back(f);
        max_port = std::max({max_port, f.src, f.dst});
    }
    if (by_id.empty()) throw model_error("csv: no rows");

    // Smallest M covering all ports: ingress ids must stay <= M.
    int M = (max_port + 1) / 2;
    for (const auto& [id, c] : by_id)
        for (const Flow& f : c.flows) M = std::max(M, f.src);
    std::vector<Coflow> coflows;
    for (int id : id_order) coflows.push_back(by_id.at(id));
    return Batch(Fabric(M), std::move(coflows));
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw model_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw model_error("cannot write " + path);
    out << content;
}

Batch load_batch(const std::string& path) {
    const std::string text = read_file(path);
    if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv")
        return batch_from_csv(text);
    return batch_from_json(text);
}

void save_batch_json(const Batch& batch, const std::string& path) {
    write_file(path, batch_to_json(batch));
}

}  // namespace coflow
