#include "sclink/jscpr.hpp"

namespace sclink {

SymbolFrame jscpr_run(const SymbolFrame& frame, const NlpcFilter* nlpc, const PpncFilterBank* ppnc,
                      const PilotSchedule& schedule, JscprStages stages) {
  SymbolFrame y = frame;
  if (stages.nlpc) {
    require(nlpc != nullptr, "jscpr_run: NLPC stage enabled without a filter");
    y = nlpc_apply(frame, *nlpc).y;
  }
  if (!stages.ppnc) return y;
  require(ppnc != nullptr, "jscpr_run: PPNC stage enabled without a filter bank");
  if (stages.nlpc)
    require(nlpc->subcarriers() * 2 == ppnc->streams(), "jscpr_run: NLPC and PPNC disagree on M");
  return ppnc_apply(y, schedule, *ppnc).z;
}

}  // namespace sclink
