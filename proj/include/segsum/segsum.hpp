#pragma once

#include "segsum/adversary.hpp"
#include "segsum/analysis.hpp"
#include "segsum/config_io.hpp"
#include "segsum/domain.hpp"
#include "segsum/engine.hpp"
#include "segsum/error.hpp"
#include "segsum/net.hpp"
#include "segsum/party.hpp"
#include "segsum/ring.hpp"
#include "segsum/rng.hpp"
#include "segsum/segmentation.hpp"
#include "segsum/transcript.hpp"
#include "segsum/wire.hpp"
