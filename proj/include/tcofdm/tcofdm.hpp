#pragma once

#include "tcofdm/channel.hpp"
#include "tcofdm/dft.hpp"
#include "tcofdm/fec.hpp"
#include "tcofdm/modem.hpp"
#include "tcofdm/ofdm.hpp"
#include "tcofdm/rng.hpp"
#include "tcofdm/signal.hpp"
#include "tcofdm/sim.hpp"
#include "tcofdm/turbo.hpp"
