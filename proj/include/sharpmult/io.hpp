#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "sharpmult/martingale.hpp"
#include "sharpmult/symbols.hpp"
#include "sharpmult/witness.hpp"

namespace sharpmult::io {

using Json = nlohmann::ordered_json;

/// Symbol specification, e.g.
///   {"family": "quadratic", "d": 2, "matrix": [[1, 0], [0, -1]], "sign": "stated"}
///   {"family": "levy", "d": 2, "nu": [[[1, 0], 0.5, 1]], "sphere": [[[0, 1], 1, 0]],
///    "b": 0, "B": 1}
/// Index subsets are 0-based. Unknown keys are rejected.
symbols::MultiplierSymbol symbol_from_json(const Json& spec);
Json symbol_to_json(const symbols::MultiplierSymbol& symbol);

/// Parses text or reads a file; both throw ValidationError on malformed input.
Json parse_json(const std::string& text);
Json read_json_file(const std::string& path);

/// {"N": depth, "d": [[...], ...], "v": [...]}; "v" holds one value per
/// level for deterministic sequences and one array per level otherwise.
Json martingale_to_json(const martingale::PaleyWalshMartingale& f,
                        const martingale::TransformSequence& v);

Json certificate_to_json(const witness::WitnessCertificate& certificate);

/// Two-space indented dump with a trailing newline.
std::string dump(const Json& json);

/// 15 significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double value);

/// Comma-separated row with LF ending. Cells are written verbatim.
void write_csv_row(std::ostream& out, const std::vector<std::string>& cells);

}  // namespace sharpmult::io
