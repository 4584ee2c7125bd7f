#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "glscov/clt.hpp"
#include "glscov/cov_bounds.hpp"
#include "glscov/finite_oracle.hpp"
#include "glscov/fundamental.hpp"
#include "glscov/psi.hpp"

namespace glscov::io {

using Json = nlohmann::ordered_json;

// Non-finite values have no JSON literal; they are written as "inf", "-inf", "nan".
Json number(double x);
// Accepts JSON numbers and the strings above.
double to_double(const Json& j);

// %.17g, with inf / -inf / nan spelled out
std::string csv_double(double x);

Json psi_to_json(const PsiFunction& psi);
PsiFunction psi_from_json(const Json& j);

// Inline JSON when the argument starts with '{' or '[', otherwise a file path.
Json read_json_arg(const std::string& inline_or_path);
PsiFunction parse_psi(const std::string& inline_or_path);

// CSV with header `p,norm`
MomentTable read_moment_csv(std::istream& in);
void write_moment_csv(std::ostream& out, const MomentTable& table);

// one float per line; blank lines and lines starting with '#' are skipped
std::vector<double> read_samples(std::istream& in);
std::vector<double> read_samples_file(const std::string& path);

Json to_json(const FundamentalResult& r);
Json to_json(const BoundReport& r);
Json to_json(const UniformPhi& r);
Json to_json(const FactorizationCheck& r);
Json to_json(const SharpnessResult& r);
Json to_json(const SummabilityReport& r);
Json to_json(const SigmaRow& r);
// summary only; per-instance rows go to CSV
Json to_json(const CampaignReport& r);

void write_campaign_csv(std::ostream& out, const CampaignReport& r);

// {"kind":"m_dependent","coeffs":[...],"innovation":"normal"},
// {"kind":"finite_markov","transition":[[...]],"values":[...]},
// {"kind":"user_samples","samples":[...]} or {"samples_file": path}; optional "seed".
SequenceModel model_from_json(const Json& j);

}  // namespace glscov::io
