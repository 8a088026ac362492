#pragma once

#include <string>
#include <vector>

#include "fractal_spectra/lattice_trace.hpp"
#include "fractal_spectra/sg_decimation.hpp"
#include "fractal_spectra/sg_graph.hpp"
#include "fractal_spectra/sl_operator.hpp"
#include "fractal_spectra/zeta.hpp"

namespace fractal_spectra {

/// Shortest round-trip decimal form (at most 17 significant digits),
/// independent of the C locale.
std::string format_double(double x);

std::string graph_to_json(const SGLevelGraph& g);
std::string lattice_to_json(const LatticeGraph& g);

/// eigenvalue,multiplicity
std::string spectrum_to_csv(const SpectrumMultiset& s);

/// {"levels": [[{value, multiplicity, parent, branch}, ...], ...]}
std::string tree_to_json(const DecimationTree& tree);

/// {alpha, depth, lambda_max, grid_points, roots}
std::string generating_set_to_json(const GeneratingSet& s);
/// Throws InvalidArgument on malformed input.
GeneratingSet generating_set_from_json(const std::string& text);

/// value,k,p
std::string ladder_to_csv(const SpectrumLadder& ladder);

/// s_re,s_im,value_re,value_im,error_estimate
std::string zeta_to_csv(const std::vector<ZetaValue>& values);

std::string poles_to_json(const std::vector<Pole>& poles);

/// {branch, prefactor, factor_value, product}; complex values as [re, im]
std::string unbounded_to_json(const UnboundedReport& r);

}  // namespace fractal_spectra
