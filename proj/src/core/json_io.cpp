#include "cliff/json_io.hpp"

#include "cliff/error.hpp"

namespace cliff {

Json signature_to_json(const Signature& sig) {
  return Json{{"p", sig.p}, {"q", sig.q}, {"field", sig.is_complex() ? "C" : "R"}};
}

Signature signature_from_json(const Json& j) {
  try {
    const std::string field = j.value("field", std::string("R"));
    if (field != "R" && field != "C") {
      throw Error(ErrorKind::InvalidArgument, "field must be \"R\" or \"C\", got \"" + field + "\"");
    }
    return make_signature(j.at("p").get<int>(), j.at("q").get<int>(),
                          field == "C" ? ScalarField::Complex : ScalarField::Real);
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::InvalidArgument, std::string("bad signature JSON: ") + e.what());
  }
}

Json multivector_to_json(const Multivector& m) {
  Json j = signature_to_json(m.signature());
  Json coeffs = Json::object();
  for (std::uint32_t i = 0; i < m.size(); ++i) {
    const Complex c = m.coefficient(i);
    if (c == 0.0) continue;
    const std::string key = blade_name(Blade{i});
    if (m.is_complex()) {
      coeffs[key] = Json::array({c.real(), c.imag()});
    } else {
      coeffs[key] = c.real();
    }
  }
  j["coeffs"] = std::move(coeffs);
  return j;
}

Multivector multivector_from_json(const Json& j) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "multivector JSON must be an object");
  return multivector_from_json(j, signature_from_json(j));
}

Multivector multivector_from_json(const Json& j, const Signature& sig) {
  if (!j.is_object()) throw Error(ErrorKind::InvalidArgument, "multivector JSON must be an object");
  if (j.contains("p") && signature_from_json(j) != sig) {
    throw Error(ErrorKind::SignatureMismatch, "multivector signature does not match context");
  }
  Multivector m(sig);
  if (!j.contains("coeffs")) return m;
  const Json& coeffs = j.at("coeffs");
  if (!coeffs.is_object()) throw Error(ErrorKind::InvalidArgument, "\"coeffs\" must be an object");
  for (const auto& [key, value] : coeffs.items()) {
    const Blade b = parse_blade(key, sig.n());
    if (value.is_number()) {
      m.set(b, value.get<double>());
    } else if (value.is_array() && value.size() == 2 && value[0].is_number() && value[1].is_number()) {
      m.set(b, Complex(value[0].get<double>(), value[1].get<double>()));
    } else {
      throw Error(ErrorKind::InvalidArgument, "coefficient \"" + key + "\" must be a number or [re, im]");
    }
  }
  return m;
}

}  // namespace cliff
