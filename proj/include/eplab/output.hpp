// output.hpp: CSV / JSON emission
//
// CSV: `,` delimiter, `.` decimal point, LF line endings, 17 significant
// digits, rows in grid order. Schemas:
//   trajectories  a,state,E,gamma_half,rigidity,a_norm,b_sq_1,...,b_sq_N
//                 (first column is y for y-sweeps; state is 1-based)
//   cross section E,sigma,re_S,im_S
//   surface       y,E,sigma

#pragma once

#include "eplab/epfinder.hpp"
#include "eplab/scattering.hpp"
#include "eplab/sweep.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace eplab {

std::string format_number(double v);

void write_csv(std::ostream& os, const TrajectorySet& t);
void write_csv(std::ostream& os, const CrossSectionGrid& g);
void write_csv(std::ostream& os, const CrossSectionSurface& s);
void write_csv(std::ostream& os, const std::vector<EPCandidate>& eps);

void write_json(std::ostream& os, const TrajectorySet& t);
void write_json(std::ostream& os, const CrossSectionGrid& g);
void write_json(std::ostream& os, const CrossSectionSurface& s);
void write_json(std::ostream& os, const std::vector<EPCandidate>& eps);

// Writes to path in the given format; throws std::runtime_error on I/O failure.
template <class Data>
void emit(const Data& data, const std::string& path, bool json);

// Same as emit with json = false.
template <class Data>
void emit_csv(const Data& data, const std::string& path) {
    emit(data, path, false);
}

}  // namespace eplab
