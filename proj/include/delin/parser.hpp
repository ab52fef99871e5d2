#pragma once

#include <optional>
#include <string>
#include <vector>

#include "delin/dec.hpp"

namespace delin {

// aux w = exp(arg): w is known through dw/dv = (d arg/dv) w.
struct AuxDef {
  std::string name;
  Expr arg;
};

struct MapComponent {
  std::string target;  // target variable name, e.g. "xh"
  Expr expr;           // over the source variables
};

struct FileOptions {
  std::optional<bool> casesplit;
  std::optional<int> extraOrder, maxCases;
};

struct SystemFile {
  DPS dps;
  std::vector<std::vector<std::string>> ranking;  // blocks, highest first; empty = orderly
  FileOptions options;
  std::vector<AuxDef> aux;
  std::vector<MapComponent> map;
  std::optional<Point> point;
};

// Grammar in docs/grammar.ebnf.
SystemFile parseSystemFile(const std::string& text);
DPS parseSystem(const std::string& text);
SystemFile readSystemFile(const std::string& path);

// Parses a single expression over an existing space.
Expr parseExpr(const std::string& text, const VarSpace& vs);

// Block ranking from the file, orderly when none is given.
Ranking rankingFor(const SystemFile& f);
CompleteOptions optionsFor(const SystemFile& f, CompleteOptions base = defaultOptions());

// Inverse of parseSystemFile up to normalization of the expressions.
std::string printSystem(const SystemFile& f);

}  // namespace delin
