#pragma once

#include <fstream>
#include <string>

#include <json.hpp>

#include "replay/generators.hpp"
#include "replay/hypothesis_class.hpp"

namespace replay {

// Class file: {"domain_size": N, "hypotheses": ["0110...", ...]}, one
// N-character bit string per hypothesis, character i = h(point i).

inline nlohmann::json class_to_json(const HypothesisClass& H) {
  nlohmann::json hs = nlohmann::json::array();
  for (Hypothesis h : H) hs.push_back(to_bitstring(h, H.domain()));
  return {{"domain_size", H.domain().size()}, {"hypotheses", std::move(hs)}};
}

inline HypothesisClass class_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("domain_size") || !doc.contains("hypotheses")) {
    throw Error("class file needs \"domain_size\" and \"hypotheses\"");
  }
  const auto n = doc.at("domain_size").get<std::size_t>();
  Domain domain(n);
  std::vector<Hypothesis> hs;
  for (const auto& entry : doc.at("hypotheses")) {
    const auto text = entry.get<std::string>();
    if (text.size() != n) {
      throw DomainMismatch("hypothesis \"" + text + "\" does not have " + std::to_string(n) + " characters");
    }
    hs.push_back(from_bitstring(text));
  }
  return HypothesisClass(domain, std::move(hs));
}

inline HypothesisClass read_class_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open class file: " + path);
  nlohmann::json doc;
  try {
    in >> doc;
  } catch (const nlohmann::json::exception& e) {
    throw Error("malformed class file " + path + ": " + e.what());
  }
  return class_from_json(doc);
}

/// A generator name such as "thresholds:8", otherwise a path to a class file.
inline HypothesisClass load_class(const std::string& spec) {
  if (auto generated = generators::from_name(spec)) return *std::move(generated);
  return read_class_file(spec);
}

}  // namespace replay
