#pragma once

#include <json.hpp>

#include "cliff/multivector.hpp"

namespace cliff {

using Json = nlohmann::json;

// {"p":2,"q":0,"field":"R"}
Json signature_to_json(const Signature& sig);
Signature signature_from_json(const Json& j);

// {"p":2,"q":0,"field":"R","coeffs":{"":1.0,"1":0.5,"12":-0.25}}
// Keys are ascending generator digits, "" is the identity. Complex algebras
// write every coefficient as [re, im]. Zero coefficients are omitted. Doubles
// are printed in shortest round-trip form, so parse(dump(x)) == x exactly.
Json multivector_to_json(const Multivector& m);
Multivector multivector_from_json(const Json& j);

// Reads coefficients against an already known signature (the p/q/field keys
// may be absent; when present they must match).
Multivector multivector_from_json(const Json& j, const Signature& sig);

}  // namespace cliff
