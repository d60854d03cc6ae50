// greencm: CM values of higher Green functions and their predicted factorizations.

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "greencm/errors.hpp"
#include "greencm/pipeline.hpp"

using namespace greencm;

namespace {

enum Exit { kOk = 0, kFailure = 1, kConfig = 2, kSingular = 3, kUnsupported = 4 };

struct Common {
  std::string config;
  std::optional<long> precisionBits;
  std::optional<std::string> tol;
  std::optional<unsigned> threads;
  bool json = false;
};

void addCommon(CLI::App* sub, Common& c, bool needsConfig = true) {
  auto* opt = sub->add_option("--config", c.config, "instance configuration (TOML)");
  if (needsConfig) opt->required();
  sub->add_option("--precision-bits", c.precisionBits, "working precision in bits");
  sub->add_option("--tol", c.tol, "residual tolerance, e.g. 1e-8");
  sub->add_option("--threads", c.threads, "worker threads for lattice sums (0: all cores)");
  sub->add_flag("--json", c.json, "print the full JSON report");
}

InstanceConfig resolveConfig(const Common& c) {
  InstanceConfig cfg = loadConfig(c.config);
  if (c.precisionBits) cfg.precisionBits = *c.precisionBits;
  if (c.tol) cfg.tol = *c.tol;
  if (c.threads) cfg.threads = *c.threads;
  if (const char* env = std::getenv("GREENCM_THREADS")) {
    try {
      cfg.threads = static_cast<unsigned>(std::stoul(env));
    } catch (const std::exception&) {
      throw ConfigurationError("GREENCM_THREADS is not a nonnegative integer");
    }
  }
  (void)cfg.tolerance();
  return cfg;
}

void printReport(const VerificationReport& rep, bool json) {
  if (json) {
    std::cout << rep.toJson().dump(2) << "\n";
    return;
  }
  std::cout << "verdict: " << rep.verdict << "\n";
  if (rep.lhsValue) std::cout << "lhs: " << rep.lhsValue->toString(25) << "\n";
  if (rep.rhsPrediction) std::cout << "rhs: " << rep.rhsPrediction->toString(25) << "\n";
  if (rep.residual) std::cout << "residual: " << rep.residual->toString(6) << "\n";
  if (rep.kappaUsed) std::cout << "kappa: " << *rep.kappaUsed << "\n";
  if (rep.unitExponent) std::cout << "unit exponent: " << *rep.unitExponent << "\n";
  for (const auto& n : rep.notes) std::cout << "note: " << n << "\n";
}

int reportExit(const VerificationReport& rep) {
  if (rep.verdict != "verified") std::cerr << "warning: verdict " << rep.verdict << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"CM values of higher Green functions versus Eisenstein-coefficient predictions"};
  app.require_subcommand(1);
  std::string calibrationPath = defaultCalibrationPath();
  app.add_option("--calibration", calibrationPath, "calibration data file");

  Common common;
  long z1 = 0, z2 = 0;
  auto* green = app.add_subcommand("green-eval", "evaluate the Green function at one CM pair");
  addCommon(green, common);
  green->add_option("--z1", z1, "index into the reduced forms of d1");
  green->add_option("--z2", z2, "index into the reduced forms of d2");

  auto* cm = app.add_subcommand("cm-points", "list CM points and j-values");
  addCommon(cm, common);

  auto* predict = app.add_subcommand("predict-factorization", "symbolic right-hand sides and factor ledger");
  addCommon(predict, common);

  auto* avg = app.add_subcommand("verify-average", "check the averaged plus identity");
  addCommon(avg, common);

  std::optional<long> kappaMax;
  std::optional<size_t> flip;
  auto* diff = app.add_subcommand("verify-difference", "check the minus identity up to units");
  addCommon(diff, common);
  diff->add_option("--kappa-max", kappaMax, "largest kappa scanned");
  diff->add_option("--flip-valuation", flip, "negate one valuation of this ledger entry (negative control)");

  bool write = false;
  auto* cal = app.add_subcommand("calibrate", "recover the global constant from the r = 0 instances");
  addCommon(cal, common, false);
  cal->add_flag("--write", write, "store the recognized constant in the calibration file");

  auto* self = app.add_subcommand("selftest", "fast internal consistency checks");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*self) {
      SelfTestResult r = runSelfTest();
      for (const auto& [name, ok] : r.checks) std::cout << (ok ? "PASS " : "FAIL ") << name << "\n";
      return r.passed() ? kOk : kFailure;
    }
    if (*cal) {
      long bits = common.precisionBits.value_or(640);
      Precision p(bits);
      BigReal tol = BigReal::parse(common.tol.value_or("1e-40"), p);
      CalibrationResult res = runCalibration({{-4, -3}, {-4, -7}, {-3, -8}}, p, tol);
      if (common.json)
        std::cout << res.toJson().dump(2) << "\n";
      else
        std::cout << "constant: " << (res.constant ? res.constant->get_str() : "not recognized")
                  << (res.consistent ? "" : " (inconsistent)") << "\n";
      if (!res.consistent) {
        std::cerr << "warning: calibration instances disagree\n";
        return kOk;
      }
      if (write) {
        Calibration c;
        c.globalConstant = *res.constant;
        c.details = {{"precision_bits", bits}, {"instances", res.toJson()["instances"]}};
        saveCalibration(c, calibrationPath);
      }
      return kOk;
    }

    InstanceConfig cfg = resolveConfig(common);
    if (*green) {
      nlohmann::json j = cmdGreenEval(cfg, z1, z2);
      std::cout << (common.json ? j.dump(2) : j["value"].get<std::string>()) << "\n";
      if (!j["converged"].get<bool>()) std::cerr << "warning: tolerance not reached within the cutoff budget\n";
      return kOk;
    }
    if (*cm) {
      nlohmann::json j = cmdCmPoints(cfg);
      if (common.json) {
        std::cout << j.dump(2) << "\n";
      } else {
        for (const auto& g : j) {
          std::cout << "d = " << g["d"] << ", h = " << g["class_number"] << ", w = " << g["unit_count"] << "\n";
          for (const auto& pt : g["points"])
            std::cout << "  " << pt["form"].dump() << "  j = " << pt["j"][0].get<std::string>() << "\n";
        }
      }
      return kOk;
    }
    Calibration calib = loadCalibration(calibrationPath);
    if (*predict) {
      nlohmann::json j = cmdPredictFactorization(cfg, calib);
      if (common.json) {
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "average: " << j["average"]["symbolic"].get<std::string>() << " = "
                  << j["average"]["value"].get<std::string>() << "\n";
        if (!j["difference"].is_null())
          std::cout << "difference: " << j["difference"]["symbolic"].get<std::string>() << " = "
                    << j["difference"]["value"].get<std::string>() << "\n";
      }
      return kOk;
    }
    if (*avg) {
      VerificationReport rep = cmdVerifyAverage(cfg, calib);
      printReport(rep, common.json);
      return reportExit(rep);
    }
    if (*diff) {
      if (kappaMax) cfg.kappaMax = *kappaMax;
      VerificationReport rep = cmdVerifyDifference(cfg, calib, {flip});
      printReport(rep, common.json);
      return reportExit(rep);
    }
  } catch (const ConfigurationError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kConfig;
  } catch (const SingularConfiguration& e) {
    std::cerr << "singular configuration: " << e.what() << "\n";
    return kSingular;
  } catch (const UnsupportedInstance& e) {
    std::cerr << "unsupported instance: " << e.what() << "\n";
    return kUnsupported;
  } catch (const UnsupportedLocalDatum& e) {
    std::cerr << "unsupported local datum: " << e.what() << "\n";
    return kUnsupported;
  } catch (const NotImplementedScope& e) {
    std::cerr << "not implemented: " << e.what() << "\n";
    return kUnsupported;
  }
  return kOk;
}
