#pragma once

#include <fstream>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "rackopt/allocation/solve.hpp"
#include "rackopt/core/instance.hpp"
#include "rackopt/sequencing/solution.hpp"

namespace rackopt::io {

using json = nlohmann::ordered_json;

/// Raised on malformed files; the message carries the JSON path of the
/// offending element.
class ParseError : public std::runtime_error {
public:
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

namespace detail {

inline const json& need(const json& j, const char* key, const std::string& path) {
    if (!j.is_object() || !j.contains(key)) {
        throw ParseError(path + ": missing field '" + key + "'");
    }
    return j.at(key);
}

inline int need_int(const json& j, const char* key, const std::string& path) {
    const json& v = need(j, key, path);
    if (!v.is_number_integer()) throw ParseError(path + "." + key + ": expected an integer");
    return v.get<int>();
}

inline std::vector<Line> parse_lines(const json& arr, const std::string& path, int num_products) {
    if (!arr.is_array()) throw ParseError(path + ": expected an array");
    std::vector<Line> lines;
    for (size_t i = 0; i < arr.size(); ++i) {
        const std::string at = path + "[" + std::to_string(i) + "]";
        const int product = need_int(arr[i], "product", at);
        const int units = need_int(arr[i], "units", at);
        if (product < 0 || product >= num_products) {
            throw ParseError(at + ".product: index " + std::to_string(product) + " out of range");
        }
        if (units < 1) throw ParseError(at + ".units: must be positive");
        lines.push_back({product, units});
    }
    return lines;
}

inline json lines_to_json(const std::vector<Line>& lines) {
    json arr = json::array();
    for (const auto& l : lines) arr.push_back({{"product", l.product}, {"units", l.units}});
    return arr;
}

}  // namespace detail

inline json instance_to_json(const Instance& inst) {
    json j;
    j["name"] = inst.name;
    j["num_products"] = inst.num_products;
    j["orders"] = json::array();
    for (const auto& o : inst.orders) j["orders"].push_back({{"lines", detail::lines_to_json(o.lines)}});
    j["racks"] = json::array();
    for (const auto& r : inst.racks) j["racks"].push_back({{"supply", detail::lines_to_json(r.supply)}});
    j["pickers"] = json::array();
    for (const auto& p : inst.pickers) j["pickers"].push_back({{"capacity", p.capacity}});
    if (!inst.face_groups.empty()) j["face_groups"] = inst.face_groups;
    return j;
}

inline Instance instance_from_json(const json& j) {
    Instance inst;
    if (j.contains("name")) {
        if (!j.at("name").is_string()) throw ParseError("name: expected a string");
        inst.name = j.at("name").get<std::string>();
    }
    inst.num_products = detail::need_int(j, "num_products", "");

    const json& orders = detail::need(j, "orders", "");
    if (!orders.is_array()) throw ParseError("orders: expected an array");
    for (size_t i = 0; i < orders.size(); ++i) {
        const std::string at = "orders[" + std::to_string(i) + "]";
        inst.orders.push_back(
            {detail::parse_lines(detail::need(orders[i], "lines", at), at + ".lines", inst.num_products)});
    }

    const json& racks = detail::need(j, "racks", "");
    if (!racks.is_array()) throw ParseError("racks: expected an array");
    for (size_t i = 0; i < racks.size(); ++i) {
        const std::string at = "racks[" + std::to_string(i) + "]";
        inst.racks.push_back(
            {detail::parse_lines(detail::need(racks[i], "supply", at), at + ".supply", inst.num_products)});
    }

    const json& pickers = detail::need(j, "pickers", "");
    if (!pickers.is_array()) throw ParseError("pickers: expected an array");
    for (size_t i = 0; i < pickers.size(); ++i) {
        inst.pickers.push_back({detail::need_int(pickers[i], "capacity", "pickers[" + std::to_string(i) + "]")});
    }

    if (j.contains("face_groups")) {
        const json& groups = j.at("face_groups");
        if (!groups.is_array()) throw ParseError("face_groups: expected an array of arrays");
        for (size_t g = 0; g < groups.size(); ++g) {
            if (!groups[g].is_array())
                throw ParseError("face_groups[" + std::to_string(g) + "]: expected an array");
            std::vector<int> grp;
            for (const auto& v : groups[g]) {
                if (!v.is_number_integer())
                    throw ParseError("face_groups[" + std::to_string(g) + "]: expected rack indices");
                grp.push_back(v.get<int>());
            }
            inst.face_groups.push_back(std::move(grp));
        }
    }

    auto bad = validate_instance(inst);
    if (!bad.empty()) throw ParseError("instance invalid: " + bad.front());
    return inst;
}

inline void write_instance(const Instance& inst, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << instance_to_json(inst).dump(2) << '\n';
}

inline Instance read_instance(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    try {
        return instance_from_json(j);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

// --- allocation solutions ---------------------------------------------------

inline json allocation_to_json(const alloc::Allocation& a) {
    json j;
    j["orders_of_picker"] = a.orders_of_picker;
    j["racks_of_picker"] = a.racks_of_picker;
    if (!a.draws.empty()) {
        j["draws"] = json::array();
        for (const auto& d : a.draws) {
            j["draws"].push_back({{"product", d.product}, {"rack", d.rack}, {"picker", d.picker}, {"units", d.units}});
        }
    }
    return j;
}

inline alloc::Allocation allocation_from_json(const json& j) {
    alloc::Allocation a;
    const json& orders = detail::need(j, "orders_of_picker", "");
    const json& racks = detail::need(j, "racks_of_picker", "");
    if (!orders.is_array() || !racks.is_array()) {
        throw ParseError("orders_of_picker / racks_of_picker: expected arrays");
    }
    a.orders_of_picker = orders.get<std::vector<std::vector<int>>>();
    a.racks_of_picker = racks.get<std::vector<std::vector<int>>>();
    std::set<int> used;
    for (const auto& v : a.racks_of_picker)
        for (int r : v) used.insert(r);
    a.used_racks.assign(used.begin(), used.end());
    if (j.contains("draws")) {
        for (size_t i = 0; i < j.at("draws").size(); ++i) {
            const json& d = j.at("draws")[i];
            const std::string at = "draws[" + std::to_string(i) + "]";
            a.draws.push_back({detail::need_int(d, "product", at), detail::need_int(d, "rack", at),
                               detail::need_int(d, "picker", at), detail::need_int(d, "units", at)});
        }
    }
    return a;
}

inline void write_allocation(const alloc::Allocation& a, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << allocation_to_json(a).dump(2) << '\n';
}

inline alloc::Allocation read_allocation(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return allocation_from_json(j);
}

// --- sequence solutions -------------------------------------------------------

/// Sequence solutions are written in the sequencing instance's own index
/// space together with the context needed to rebuild that instance (picker,
/// bins, revisits). `rack_order` entries are original rack indices.
struct SequenceSolutionFile {
    int picker = 0;
    int bins = 2;
    int revisits = 0;
    bool unbounded_revisits = false;
    seq::SequenceSolution solution;  // local indices except rack_order (original racks)
};

inline json sequence_to_json(const SequenceSolutionFile& f) {
    json j;
    j["picker"] = f.picker;
    j["bins"] = f.bins;
    j["revisits"] = f.revisits;
    if (f.unbounded_revisits) j["unbounded_revisits"] = true;
    j["rack_order"] = f.solution.rack_order;
    j["picks"] = json::array();
    for (const auto& p : f.solution.picks) {
        j["picks"].push_back({{"product", p.product}, {"order", p.order}, {"position", p.position}, {"units", p.units}});
    }
    j["open"] = json::array();
    for (const auto& e : f.solution.opens) j["open"].push_back({{"order", e.order}, {"position", e.position}});
    j["close"] = json::array();
    for (const auto& e : f.solution.closes) j["close"].push_back({{"order", e.order}, {"position", e.position}});
    return j;
}

inline SequenceSolutionFile sequence_from_json(const json& j) {
    SequenceSolutionFile f;
    f.picker = detail::need_int(j, "picker", "");
    f.bins = detail::need_int(j, "bins", "");
    f.revisits = detail::need_int(j, "revisits", "");
    f.unbounded_revisits = j.value("unbounded_revisits", false);
    f.solution.unbounded_revisits = f.unbounded_revisits;
    const json& order = detail::need(j, "rack_order", "");
    if (!order.is_array()) throw ParseError("rack_order: expected an array");
    f.solution.rack_order = order.get<std::vector<int>>();
    for (size_t i = 0; i < detail::need(j, "picks", "").size(); ++i) {
        const json& p = j.at("picks")[i];
        const std::string at = "picks[" + std::to_string(i) + "]";
        f.solution.picks.push_back({detail::need_int(p, "product", at), detail::need_int(p, "order", at),
                                    detail::need_int(p, "position", at), detail::need_int(p, "units", at)});
    }
    for (size_t i = 0; i < detail::need(j, "open", "").size(); ++i) {
        const json& e = j.at("open")[i];
        const std::string at = "open[" + std::to_string(i) + "]";
        f.solution.opens.push_back({detail::need_int(e, "order", at), detail::need_int(e, "position", at)});
    }
    for (size_t i = 0; i < detail::need(j, "close", "").size(); ++i) {
        const json& e = j.at("close")[i];
        const std::string at = "close[" + std::to_string(i) + "]";
        f.solution.closes.push_back({detail::need_int(e, "order", at), detail::need_int(e, "position", at)});
    }
    return f;
}

inline void write_sequence(const SequenceSolutionFile& f, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << sequence_to_json(f).dump(2) << '\n';
}

inline SequenceSolutionFile read_sequence(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open: " + path);
    json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path + ": " + e.what());
    }
    return sequence_from_json(j);
}

}  // namespace rackopt::io
