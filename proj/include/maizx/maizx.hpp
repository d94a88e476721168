#pragma once

#include "maizx/carbon.hpp"
#include "maizx/config.hpp"
#include "maizx/error.hpp"
#include "maizx/forecast.hpp"
#include "maizx/ingest.hpp"
#include "maizx/model.hpp"
#include "maizx/ranking.hpp"
#include "maizx/report.hpp"
#include "maizx/simulate.hpp"
#include "maizx/time.hpp"
