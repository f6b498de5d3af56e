#ifndef FVQA_FVQA_HPP_
#define FVQA_FVQA_HPP_

#include "fvqa/consistency.hpp"
#include "fvqa/datastats.hpp"
#include "fvqa/error.hpp"
#include "fvqa/evalmetrics.hpp"
#include "fvqa/frame_schema.hpp"
#include "fvqa/mtl/baselines.hpp"
#include "fvqa/mtl/checkpoint.hpp"
#include "fvqa/mtl/features.hpp"
#include "fvqa/mtl/model.hpp"
#include "fvqa/mtl/params.hpp"
#include "fvqa/mtl/rmsprop.hpp"
#include "fvqa/mtl/trainer.hpp"
#include "fvqa/realizer.hpp"
#include "fvqa/taxonomy.hpp"
#include "fvqa/templater.hpp"
#include "fvqa/text.hpp"

#endif  // FVQA_FVQA_HPP_
