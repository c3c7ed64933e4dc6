#pragma once

// Umbrella header for the whole library. Translation units that do not need
// networking can include the individual headers instead and skip the HTTP
// client's dependencies.

#include "scopemeter/bibtex.hpp"
#include "scopemeter/core.hpp"
#include "scopemeter/csv.hpp"
#include "scopemeter/error.hpp"
#include "scopemeter/indices.hpp"
#include "scopemeter/journal.hpp"
#include "scopemeter/panel.hpp"
#include "scopemeter/report.hpp"
#include "scopemeter/ris.hpp"
#include "scopemeter/svg.hpp"
#include "scopemeter/version.hpp"
#include "scopemeter/works_client.hpp"
