#include "coalition/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>

#include "coalition/errors.hpp"
#include "coalition/parallel.hpp"

namespace coalition {

using Json = nlohmann::ordered_json;

namespace {

std::string utc_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Json resolved_params(const ExperimentConfig& cfg) {
  const auto& p = cfg.params;
  Json j;
  j["Z"] = p.Z;
  j["e"] = p.e;
  j["theta"] = p.theta;
  j["theta_prime"] = p.theta_prime;
  j["c"] = p.c;
  j["c_c"] = p.c_c;
  j["g_m"] = p.g_m;
  j["alpha"] = p.alpha;
  j["beta"] = p.beta;
  j["mu"] = p.mu;
  j["benefit"] = p.benefit.describe();
  j["mutation_form"] = to_string(cfg.chain.mutation_form);
  return j;
}

}  // namespace

std::string sha256_hex(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + file.string() + "'");
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) throw std::runtime_error("sha256 init failed");
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char hex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[digest[i] >> 4];
    out += hex[digest[i] & 15];
  }
  return out;
}

RunOutcome run(const ExperimentConfig& config) {
  RunOutcome outcome;
  const std::string started = utc_now();
  const auto t0 = std::chrono::steady_clock::now();
  outcome.report = run_experiment(config);
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Json& m = outcome.manifest;
  m["tool"] = "coalition";
  m["version"] = COALITION_VERSION;
  m["experiment"] = config.experiment;
  m["started_utc"] = started;
  m["finished_utc"] = utc_now();
  m["elapsed_seconds"] = elapsed;
  m["threads"] = thread_count();
  m["config"] = Json(config.settings);
  m["resolved"] = resolved_params(config);
  m["decisions"] = outcome.report.decisions;
  Json outputs = Json::array();
  for (const auto& f : outcome.report.files) {
    const auto path = config.out_dir / f;
    Json o;
    o["file"] = f.generic_string();
    o["bytes"] = std::filesystem::file_size(path);
    o["sha256"] = sha256_hex(path);
    outputs.push_back(o);
  }
  m["outputs"] = outputs;

  outcome.manifest_path = config.out_dir / "manifest.json";
  std::ofstream out(outcome.manifest_path, std::ios::binary | std::ios::trunc);
  out << m.dump(2) << '\n';
  if (!out) throw std::runtime_error("cannot write '" + outcome.manifest_path.string() + "'");
  return outcome;
}

ConfigPairs load_run_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  if (path.extension() != ".json") return read_config_pairs(in);
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::exception& ex) {
    throw ConfigError("manifest '" + path.string() + "' is not valid JSON: " + ex.what());
  }
  if (!j.contains("config") || !j["config"].is_object())
    throw ConfigError("manifest '" + path.string() + "' has no config object");
  ConfigPairs pairs;
  for (const auto& [key, value] : j["config"].items()) {
    if (!value.is_string()) throw ConfigError("invalid value for key '" + key + "' in manifest (expected a string)");
    pairs[key] = value.get<std::string>();
  }
  return pairs;
}

}  // namespace coalition
