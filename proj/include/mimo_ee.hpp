#pragma once

#include "mimo_ee/approximation.hpp"
#include "mimo_ee/channel.hpp"
#include "mimo_ee/config.hpp"
#include "mimo_ee/config_io.hpp"
#include "mimo_ee/errors.hpp"
#include "mimo_ee/experiments.hpp"
#include "mimo_ee/monte_carlo.hpp"
#include "mimo_ee/optimize.hpp"
#include "mimo_ee/order_stats.hpp"
#include "mimo_ee/power_model.hpp"
#include "mimo_ee/precoding.hpp"
#include "mimo_ee/properties.hpp"
#include "mimo_ee/random.hpp"
#include "mimo_ee/selection.hpp"
#include "mimo_ee/spectral.hpp"
