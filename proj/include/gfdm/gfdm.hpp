#pragma once

#include "gfdm/analysis.hpp"
#include "gfdm/channel.hpp"
#include "gfdm/config.hpp"
#include "gfdm/errors.hpp"
#include "gfdm/io.hpp"
#include "gfdm/loopback.hpp"
#include "gfdm/modem_direct.hpp"
#include "gfdm/modem_fft.hpp"
#include "gfdm/numerics.hpp"
#include "gfdm/oracle.hpp"
#include "gfdm/params.hpp"
#include "gfdm/pulses.hpp"
