// Writes synthetic price years and regulation signals in the bess input
// layouts.
#include <CLI11.hpp>
#include <iostream>

#include "bess/error.hpp"
#include "bess/synthetic.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Synthetic market data for bess"};
  int year = 2021;
  std::uint64_t seed = 11;
  std::string profile = "mixed";
  std::string out, rega, regd;
  double hours = 1.0;
  app.add_option("--year", year, "calendar year");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--profile", profile, "mixed|regulation")->check(CLI::IsMember({"mixed", "regulation"}));
  app.add_option("--out", out, "price root to write <out>/<YYYY-MM-DD>/");
  app.add_option("--rega", rega, "write a RegA signal CSV here");
  app.add_option("--regd", regd, "write a RegD signal CSV here");
  app.add_option("--hours", hours, "signal duration")->check(CLI::PositiveNumber);
  CLI11_PARSE(app, argc, argv);

  try {
    if (!out.empty()) {
      const auto days = profile == "mixed" ? bess::synthetic_year(year, seed)
                                           : bess::regulation_year(year, seed);
      for (const auto& d : days) bess::write_market_day(d, std::filesystem::path(out) / bess::format_date(d.date));
    }
    if (!rega.empty()) bess::write_reg_signal(bess::RegSignal(bess::synthetic_rega(hours, seed)), rega);
    if (!regd.empty()) bess::write_reg_signal(bess::RegSignal(bess::synthetic_regd(hours, seed)), regd);
  } catch (const bess::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
