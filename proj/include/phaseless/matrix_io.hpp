#pragma once

#include "phaseless/acquisition.hpp"
#include "phaseless/mmv.hpp"
#include "phaseless/polarization.hpp"

#include <filesystem>
#include <iosfwd>
#include <vector>

namespace phaseless {

/// Every entry as "i,j,re,im,known" (known is 0 or 1), row-major.
void write_matrix_csv(const TimeReversalMatrix& m, std::ostream& out);
/// The active set is rebuilt from the known diagonal entries.
TimeReversalMatrix read_matrix_csv(std::istream& in);

/// Complex matrix as "i,j,re,im".
void write_complex_csv(const CMatrix& m, std::ostream& out);
CMatrix read_complex_csv(std::istream& in);

/// Plan manifest: a "# plan,<kind>,<N>" line, then
/// "illumination_id,tag,kind,first,second" rows in execution order.
void write_plan_manifest(const IlluminationPlan& plan, std::ostream& out);
IlluminationPlan read_plan_manifest(std::istream& in);

/// Per-receiver intensities as "illumination_id,receiver_index,intensity".
void write_measurements(const std::vector<IntensityVector>& measurements, std::ostream& out);
std::vector<IntensityVector> read_measurements(std::istream& in);
/// Total power per illumination, summed in receiver order.
std::vector<double> total_powers(const std::vector<IntensityVector>& measurements);

/// "iteration,relative_residual,j21".
void write_gelma_trace(const std::vector<GelmaTraceRow>& trace, std::ostream& out);

std::string plan_kind_name(PlanKind kind);
PlanKind parse_plan_kind(const std::string& name);

}  // namespace phaseless
