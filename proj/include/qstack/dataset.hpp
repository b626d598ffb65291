#pragma once

#include "qstack/ainfty.hpp"
#include "qstack/report.hpp"

namespace qstack {

// In-memory model of a dataset file: named quivers, presentations,
// representations, stacks, gluing systems and twisted complexes, all parsed
// and cross-checked.
struct GluingData {
    std::shared_ptr<StructureConstants> sys;
    Deformation b;
    std::map<std::pair<int, int>, ExtElement> alpha;
    QuiverStackPtr stack;
};

struct Dataset {
    std::string path;
    SymbolTablePtr symbols;
    // held behind a stable pointer: stacks keep a reference for parsing
    std::shared_ptr<std::map<std::string, Exponent>> defines =
        std::make_shared<std::map<std::string, Exponent>>();
    std::map<std::string, QuiverPtr> quivers;
    std::map<std::string, Superpotential> superpotentials;
    std::map<std::string, PresentationPtr> presentations;
    std::map<std::string, QuiverRep> representations;
    std::map<std::string, QuiverStackPtr> stacks;
    std::map<std::string, GluingData> gluings;
    std::map<std::string, std::shared_ptr<TwistedComplex>> twisted;
    std::string default_presentation;

    const PresentationPtr& presentation(const std::string& name) const;
};

Dataset parse_dataset(const std::string& path);
Dataset parse_dataset_text(const std::string& text, const std::string& label);

} // namespace qstack
