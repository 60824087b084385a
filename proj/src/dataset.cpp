#include "cove/dataset.hpp"

#include "cove/errors.hpp"
#include "cove/text_util.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <unordered_set>

namespace cove {

namespace {
using nlohmann::json;

constexpr std::string_view kWikidataPrefix = "Who are some ";
constexpr std::string_view kWikidataMiddle = "s who were born in ";

std::size_t token_count(const std::string& s) {
    std::istringstream in(s);
    std::string tok;
    std::size_t n = 0;
    while (in >> tok) ++n;
    return n;
}

json gold_to_json(const TaskRecord& r) {
    if (const auto* g = std::get_if<ListGold>(&r.gold)) {
        json entities = json::array();
        for (const auto& e : g->entities) {
            json je{{"name", e.name}};
            if (!e.aliases.empty()) je["aliases"] = e.aliases;
            entities.push_back(std::move(je));
        }
        return json{{"entities", entities}};
    }
    if (const auto* g = std::get_if<SpanGold>(&r.gold)) {
        return json{{"spans", g->spans}};
    }
    const auto& g = std::get<BioGold>(r.gold);
    json jg{{"facts", g.facts}};
    if (g.rarity) jg["rarity"] = to_string(*g.rarity);
    return jg;
}

TaskRecord record_from_json(const json& j, TaskKind task_kind,
                            std::size_t lineno) {
    TaskRecord r;
    r.task_kind = task_kind;
    try {
        r.id = j.at("id").get<std::string>();
        r.query_text = j.at("query").get<std::string>();
        const json& gold = j.at("gold");
        switch (task_kind) {
            case TaskKind::ListQA: {
                ListGold g;
                for (const auto& je : gold.at("entities")) {
                    GoldEntity e;
                    e.name = je.at("name").get<std::string>();
                    if (je.contains("aliases")) {
                        e.aliases =
                            je.at("aliases").get<std::vector<std::string>>();
                    }
                    g.entities.push_back(std::move(e));
                }
                r.gold = std::move(g);
                break;
            }
            case TaskKind::MultiSpanQA: {
                SpanGold g;
                g.spans = gold.at("spans").get<std::vector<std::string>>();
                r.gold = std::move(g);
                break;
            }
            case TaskKind::LongformBio: {
                BioGold g;
                g.facts = gold.at("facts").get<std::vector<std::string>>();
                if (gold.contains("rarity")) {
                    g.rarity =
                        rarity_from_string(gold.at("rarity").get<std::string>());
                }
                r.gold = std::move(g);
                break;
            }
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("bad dataset record: ") + e.what(), lineno);
    }
    return r;
}

void validate_record(const TaskRecord& r, std::size_t lineno) {
    if (trim(r.id).empty()) throw ParseError("record id is empty", lineno);
    if (trim(r.query_text).empty()) {
        throw ParseError("record query is empty", lineno);
    }
    if (const auto* g = std::get_if<ListGold>(&r.gold)) {
        if (g->entities.empty()) {
            throw SchemaMismatchError("record '" + r.id +
                                      "' has no gold entities");
        }
        for (const auto& e : g->entities) {
            if (trim(e.name).empty()) {
                throw SchemaMismatchError("record '" + r.id +
                                          "' has an empty gold entity name");
            }
        }
    } else if (const auto* g = std::get_if<SpanGold>(&r.gold)) {
        if (g->spans.empty()) {
            throw SchemaMismatchError("record '" + r.id + "' has no gold spans");
        }
        for (const auto& s : g->spans) {
            if (token_count(s) > 3) {
                throw SchemaMismatchError("record '" + r.id + "' span '" + s +
                                          "' exceeds 3 tokens");
            }
        }
    } else {
        const auto& bio = std::get<BioGold>(r.gold);
        if (bio.facts.empty()) {
            throw SchemaMismatchError("record '" + r.id + "' has no gold facts");
        }
    }
}

}  // namespace

std::string make_wikidata_query(const std::string& profession,
                                const std::string& city) {
    if (trim(profession).empty() || trim(city).empty()) {
        throw EmptySlotError("profession and city must be non-empty");
    }
    return std::string(kWikidataPrefix) + profession +
           std::string(kWikidataMiddle) + city + "?";
}

bool parse_wikidata_query(const std::string& query, std::string& profession,
                          std::string& city) {
    if (query.rfind(kWikidataPrefix, 0) != 0 || query.empty() ||
        query.back() != '?') {
        return false;
    }
    std::string body = query.substr(kWikidataPrefix.size(),
                                    query.size() - kWikidataPrefix.size() - 1);
    std::size_t mid = body.find(kWikidataMiddle);
    if (mid == std::string::npos) return false;
    profession = body.substr(0, mid);
    city = body.substr(mid + kWikidataMiddle.size());
    return !profession.empty() && !city.empty();
}

std::string make_category_query(const std::string& category) {
    if (trim(category).empty()) throw EmptySlotError("category must be non-empty");
    return "Name some " + category;
}

std::string make_bio_query(const std::string& entity) {
    if (trim(entity).empty()) throw EmptySlotError("entity must be non-empty");
    return "Tell me a bio of " + entity;
}

std::vector<TaskRecord> load_dataset(const std::string& path,
                                     TaskKind task_kind) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset: " + path);
    std::vector<TaskRecord> records;
    std::unordered_set<std::string> ids;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw ParseError(std::string("bad JSON: ") + e.what(), lineno);
        }
        TaskRecord r = record_from_json(j, task_kind, lineno);
        validate_record(r, lineno);
        if (!ids.insert(r.id).second) {
            throw SchemaMismatchError("duplicate record id: '" + r.id + "'");
        }
        records.push_back(std::move(r));
    }
    return records;
}

void write_dataset(const std::string& path,
                   const std::vector<TaskRecord>& records) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write dataset: " + path);
    for (const auto& r : records) {
        json j{{"id", r.id}, {"query", r.query_text}, {"gold", gold_to_json(r)}};
        out << j.dump() << '\n';
    }
}

std::string dataset_hash_of_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open dataset: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return hex64(fnv1a64(buf.str()));
}

}  // namespace cove
