// SPDX-License-Identifier: Apache-2.0
//
// rsma-linklab - link-level simulation toolkit for rate-splitting downlink transceivers
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef RSMA_PRESETS_HPP
#define RSMA_PRESETS_HPP

#include "rsma/sim.hpp"

namespace rsma {

// Ready-made experiment configurations at desk scale. Names cover a quick
// smoke scenario, a rate-curve sweep, t* CDF studies and the BER campaigns.
std::vector<std::string> preset_names();

SimulationConfig preset_config(const std::string &name);

} // namespace rsma

#endif
