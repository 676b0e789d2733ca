#pragma once

#include "palmroi/corpus.hpp"
#include "palmroi/edge.hpp"
#include "palmroi/error.hpp"
#include "palmroi/evaluate.hpp"
#include "palmroi/features.hpp"
#include "palmroi/histogram.hpp"
#include "palmroi/image.hpp"
#include "palmroi/matcher.hpp"
#include "palmroi/pgm.hpp"
#include "palmroi/rng.hpp"
#include "palmroi/roi.hpp"
#include "palmroi/synth.hpp"
