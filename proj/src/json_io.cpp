#include "extconvex/json_io.hpp"

#include <sstream>

namespace extconvex {

namespace {

std::string key_of(const MultiIndex& I) {
  std::string s;
  for (std::size_t i = 0; i < I.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(I[i]);
  }
  return s;
}

MultiIndex key_to_index(const std::string& key) {
  MultiIndex I;
  if (key.empty()) return I;
  std::istringstream ss(key);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      I.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw std::invalid_argument("form JSON: bad coefficient key \"" + key + "\"");
    }
  }
  return I;
}

template <class S, class ToJson>
nlohmann::json form_to_json_impl(const BasicForm<S>& x, const ToJson& conv) {
  nlohmann::json j;
  j["n"] = x.n();
  j["k"] = x.degree();
  nlohmann::json coeffs = nlohmann::json::object();
  const auto& Is = multi_indices(x.n(), x.degree());
  for (std::size_t i = 0; i < Is.size(); ++i)
    if (!scalar_is_zero(x[static_cast<int>(i)]))
      coeffs[key_of(Is[i])] = conv(x[static_cast<int>(i)]);
  j["coeffs"] = std::move(coeffs);
  return j;
}

template <class FormT, class Parse>
FormT form_from_json_impl(const nlohmann::json& j, const Parse& parse) {
  if (!j.is_object() || !j.contains("n") || !j.contains("k"))
    throw std::invalid_argument("form JSON: expected object with \"n\" and \"k\"");
  const int n = j.at("n").get<int>();
  const int k = j.at("k").get<int>();
  FormT x(n, k);
  if (j.contains("coeffs")) {
    const auto& coeffs = j.at("coeffs");
    if (!coeffs.is_object()) throw std::invalid_argument("form JSON: \"coeffs\" must be an object");
    for (auto it = coeffs.begin(); it != coeffs.end(); ++it) {
      const MultiIndex I = key_to_index(it.key());
      if (!is_valid_multi_index(I, n) || static_cast<int>(I.size()) != k)
        throw std::invalid_argument("form JSON: key \"" + it.key() + "\" is not a degree-" +
                                    std::to_string(k) + " multi-index in 1.." + std::to_string(n));
      x.set_coeff(I, parse(it.value(), it.key()));
    }
  }
  return x;
}

}  // namespace

nlohmann::json form_to_json(const Form& x) {
  return form_to_json_impl(x, [](double v) { return nlohmann::json(v); });
}

nlohmann::json form_to_json(const ExactForm& x) {
  return form_to_json_impl(x, [](const Rational& v) { return nlohmann::json(v.str()); });
}

Form form_from_json(const nlohmann::json& j) {
  return form_from_json_impl<Form>(j, [](const nlohmann::json& v, const std::string& key) {
    if (v.is_string()) {
      // accept exact-mode "p/q" strings in float mode too
      try {
        return to_double(Rational(v.get<std::string>()));
      } catch (const std::exception&) {
        throw std::invalid_argument("form JSON: bad rational at key \"" + key + "\"");
      }
    }
    if (!v.is_number())
      throw std::invalid_argument("form JSON: value at key \"" + key + "\" is not a number");
    return v.get<double>();
  });
}

ExactForm exact_form_from_json(const nlohmann::json& j) {
  return form_from_json_impl<ExactForm>(j, [](const nlohmann::json& v, const std::string& key) {
    try {
      if (v.is_string()) return Rational(v.get<std::string>());
      if (v.is_number_integer()) return Rational(v.get<long long>());
    } catch (const std::exception&) {
    }
    throw std::invalid_argument("form JSON: exact mode needs integer or \"p/q\" at key \"" + key +
                                "\"");
  });
}

nlohmann::json quadratic_to_json(const QuadraticFormOnForms& q) {
  nlohmann::json j;
  j["n"] = q.n;
  j["k"] = q.k;
  std::vector<double> flat;
  flat.reserve(static_cast<std::size_t>(q.dim()) * q.dim());
  for (int i = 0; i < q.dim(); ++i)
    for (int c = 0; c < q.dim(); ++c) flat.push_back(q.M(i, c));
  j["M"] = flat;
  return j;
}

QuadraticFormOnForms quadratic_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("k") || !j.contains("M"))
    throw std::invalid_argument("matrix JSON: expected object with \"n\", \"k\", \"M\"");
  const int n = j.at("n").get<int>();
  const int k = j.at("k").get<int>();
  const int d = static_cast<int>(binomial(n, k));
  const auto& data = j.at("M");
  if (!data.is_array() || static_cast<int>(data.size()) != d * d)
    throw std::invalid_argument("matrix JSON: \"M\" must be a dense row-major array of length " +
                                std::to_string(d * d));
  Eigen::MatrixXd M(d, d);
  for (int i = 0; i < d; ++i)
    for (int c = 0; c < d; ++c) M(i, c) = data[static_cast<std::size_t>(i * d + c)].get<double>();
  return {n, k, M};
}

nlohmann::json rep_to_json(const PolyaffineRep& rep) {
  nlohmann::json j;
  j["n"] = rep.n;
  j["k"] = rep.k;
  nlohmann::json forms = nlohmann::json::array();
  for (const Form& f : rep.c) forms.push_back(form_to_json(f));
  j["c"] = forms;
  return j;
}

PolyaffineRep rep_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("n") || !j.contains("k") || !j.contains("c"))
    throw std::invalid_argument("rep JSON: expected object with \"n\", \"k\", \"c\"");
  const int n = j.at("n").get<int>();
  const int k = j.at("k").get<int>();
  std::vector<Form> c;
  for (const auto& f : j.at("c")) c.push_back(form_from_json(f));
  return {n, k, std::move(c)};
}

}  // namespace extconvex
