#pragma once

/// Flat-file formats: node/measure/problem CSVs, grid-field CSVs, verdict
/// logs, key=value reports and configs, and 16-bit PGM heatmaps.  CSV uses
/// '.' decimals, '\n' line endings and a mandatory header row; doubles are
/// printed with 17 significant digits so reruns are byte-identical.

#include <map>
#include <string>
#include <vector>

#include "maflow/comparison.hpp"
#include "maflow/monge_ampere.hpp"
#include "maflow/solver.hpp"

namespace maflow {

std::string format_double(Scalar v);

/// `x,y,boundary_flag,value` rows; the domain polygon is the convex hull
/// of the boundary-flagged nodes.
PLFunction read_node_csv(const std::string& path);
void write_node_csv(const std::string& path, const PLFunction& f);

/// `x,y,mass` rows in node order (boundary nodes carry mass 0).
void write_measure_csv(const std::string& path, const NodeSet& nodes, const AtomicMeasure& mu);

/// `x,y,boundary_flag,boundary_value,mass` rows: the node schema plus the
/// Dirichlet data and the target measure in one file.
DirichletProblem read_problem_csv(const std::string& path);
void write_problem_csv(const std::string& path, const DirichletProblem& p);

/// `i,j,x,y,value,mask` rows covering every lattice cell.
GridField read_grid_csv(const std::string& path);
void write_grid_csv(const std::string& path, const GridField& g);

/// Flat `key=value` report / config files ('#' comments allowed on read).
void write_report(const std::string& path, const std::vector<std::pair<std::string, std::string>>& kv);
std::map<std::string, std::string> read_key_value(const std::string& path);

/// 16-bit binary PGM, values linearly mapped over the in-domain range,
/// masked cells black, row j = ny-1 at the top.
void write_pgm(const std::string& path, const GridField& g);

} // namespace maflow
