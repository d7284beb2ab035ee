#pragma once

#include "gaitlab/aesi.hpp"
#include "gaitlab/classifier.hpp"
#include "gaitlab/config.hpp"
#include "gaitlab/covariate.hpp"
#include "gaitlab/dataset.hpp"
#include "gaitlab/error.hpp"
#include "gaitlab/eval.hpp"
#include "gaitlab/features.hpp"
#include "gaitlab/gaitcycle.hpp"
#include "gaitlab/grid.hpp"
#include "gaitlab/image_io.hpp"
#include "gaitlab/parallel.hpp"
#include "gaitlab/pipeline.hpp"
#include "gaitlab/random.hpp"
#include "gaitlab/serialization.hpp"
#include "gaitlab/silhouette.hpp"
#include "gaitlab/synth.hpp"
#include "gaitlab/zernike.hpp"
