// Batch file formats: the canonical JSON document and flat CSV ingestion.
#pragma once

#include <string>

#include "coflow/types.hpp"

namespace coflow {

// {"M": int, "capacities": [...] optional,
//  "coflows": [{"id", "release", "weight", "phi",
//               "flows": [{"src", "dst", "vol"}]}]}
Batch batch_from_json(const std::string& text);
std::string batch_to_json(const Batch& batch);

// Columns: coflow_id,src,dst,vol,release,weight,phi (header required).
// One row per flow; coflow attributes must agree across a coflow's rows.
// The fabric size M is the smallest that covers all referenced ports.
Batch batch_from_csv(const std::string& text);

// Loads by extension: .json or .csv.
Batch load_batch(const std::string& path);
void save_batch_json(const Batch& batch, const std::string& path);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace coflow
