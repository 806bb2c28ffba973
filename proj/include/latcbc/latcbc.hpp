// Umbrella header for the latcbc library.
#pragma once

#include "latcbc/approx.hpp"
#include "latcbc/bounds.hpp"
#include "latcbc/cbc.hpp"
#include "latcbc/circulant.hpp"
#include "latcbc/fft.hpp"
#include "latcbc/fixtures.hpp"
#include "latcbc/hankel.hpp"
#include "latcbc/io.hpp"
#include "latcbc/kernel.hpp"
#include "latcbc/oracle.hpp"
#include "latcbc/parallel.hpp"
#include "latcbc/primes.hpp"
#include "latcbc/weights.hpp"
#include "latcbc/zeta.hpp"
