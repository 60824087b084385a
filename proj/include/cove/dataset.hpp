#pragma once

// Task datasets: one JSON record per line, schema per task (see
// docs/formats.md), plus the query constructors for each task form.

#include "cove/metrics.hpp"
#include "cove/types.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace cove {

struct ListGold {
    std::vector<GoldEntity> entities;
};

struct SpanGold {
    std::vector<std::string> spans;
};

struct BioGold {
    std::vector<std::string> facts;
    std::optional<RarityBucket> rarity;
};

struct TaskRecord {
    std::string id;
    TaskKind task_kind = TaskKind::ListQA;
    std::string query_text;
    std::variant<ListGold, SpanGold, BioGold> gold;

    Query query() const { return Query{query_text, task_kind, id}; }
};

// "Who are some <profession>s who were born in <city>?" — the profession
// slot is taken verbatim and pluralized by the template's trailing 's'.
std::string make_wikidata_query(const std::string& profession,
                                const std::string& city);
// Inverse of make_wikidata_query; returns false if the text does not match
// the template.
bool parse_wikidata_query(const std::string& query, std::string& profession,
                          std::string& city);

// "Name some <category>".
std::string make_category_query(const std::string& category);

// "Tell me a bio of <entity>".
std::string make_bio_query(const std::string& entity);

// Loads and validates; duplicate ids and shape mismatches are hard errors,
// never silent drops. Record count in equals count out.
std::vector<TaskRecord> load_dataset(const std::string& path,
                                     TaskKind task_kind);

// Canonical serialization; write(load(f)) is byte-stable on files already
// in canonical form.
void write_dataset(const std::string& path,
                   const std::vector<TaskRecord>& records);
std::string dataset_hash_of_file(const std::string& path);

}  // namespace cove
