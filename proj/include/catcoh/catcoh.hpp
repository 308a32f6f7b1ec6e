#pragma once

#include "catcoh/base.hpp"
#include "catcoh/bw.hpp"
#include "catcoh/complex.hpp"
#include "catcoh/fincat.hpp"
#include "catcoh/grothendieck.hpp"
#include "catcoh/io.hpp"
#include "catcoh/matrix.hpp"
#include "catcoh/natsys.hpp"
#include "catcoh/smith.hpp"
#include "catcoh/spectral.hpp"
