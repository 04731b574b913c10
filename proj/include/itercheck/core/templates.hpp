#pragma once

#include <map>
#include <string>
#include <vector>

#include "itercheck/core/types.hpp"

namespace itercheck {

// A named set of prompt templates, one file per (domain, slot), with
// {placeholder} substitution. Slots: generate, history_item, last_answer,
// critique_wrap, verify_direct, verify_cot, verify_swapped.
class TemplateSet {
public:
    // The in-repo default wording, embedded so the library works without
    // asset files. assets/templates/default mirrors it (pinned by a test).
    static TemplateSet builtin_default();

    // Loads <dir>/<domain>/<slot>.txt for every known slot; missing files
    // fall back to the builtin wording.
    static TemplateSet load(const std::string& dir, const std::string& id);

    const std::string& id() const { return id_; }
    const std::string& raw(DomainTag domain, const std::string& slot) const;
    std::string render(DomainTag domain, const std::string& slot,
                       const std::map<std::string, std::string>& values) const;

    static const std::vector<std::string>& slot_names();
    // For exporting the builtin set to disk.
    std::map<std::string, std::string> all() const;  // "domain/slot" -> text

    static std::string substitute(const std::string& text,
                                  const std::map<std::string, std::string>& values);

private:
    std::string id_ = "default";
    std::map<std::string, std::string> texts_;  // "domain/slot" -> text
};

}  // namespace itercheck
