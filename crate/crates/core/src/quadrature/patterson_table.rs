// Gauss-Patterson nodes and weights on (-1, 1) with unit weight function.
// Level l uses 2^(l+1) - 1 nodes; the nodes of level l are every 2^(7-l)-th
// entry of the 255-point node table.

pub(crate) const MAX_LEVEL: usize = 7;

pub(crate) static NODES_255: [f64; 255] = [
    -0.99999759637974846462,
    -0.99998243035489159858,
    -0.99994399620705437576,
    -0.99987288812035761194,
    -0.99976049092443204733,
    -0.99959879967191068325,
    -0.99938033802502358193,
    -0.99909812496766759766,
    -0.99874561446809511470,
    -0.99831663531840739253,
    -0.99780535449595727456,
    -0.99720625937222195908,
    -0.99651414591489027385,
    -0.99572410469840718851,
    -0.99483150280062100052,
    -0.99383196321275502221,
    -0.99272134428278861533,
    -0.99149572117810613240,
    -0.99015137040077015918,
    -0.98868475754742947994,
    -0.98709252795403406719,
    -0.98537149959852037111,
    -0.98351865757863272876,
    -0.98153114955374010687,
    -0.97940628167086268381,
    -0.97714151463970571416,
    -0.97473445975240266776,
    -0.97218287474858179658,
    -0.96948465950245923177,
    -0.96663785155841656709,
    -0.96364062156981213252,
    -0.96049126870802028342,
    -0.95718821610986096274,
    -0.95373000642576113641,
    -0.95011529752129487656,
    -0.94634285837340290515,
    -0.94241156519108305981,
    -0.93832039777959288365,
    -0.93406843615772578800,
    -0.92965485742974005667,
    -0.92507893290707565236,
    -0.92034002547001242073,
    -0.91543758715576504064,
    -0.91037115695700429250,
    -0.90514035881326159519,
    -0.89974489977694003664,
    -0.89418456833555902286,
    -0.88845923287225699889,
    -0.88256884024734190684,
    -0.87651341448470526974,
    -0.87029305554811390585,
    -0.86390793819369047715,
    -0.85735831088623215653,
    -0.85064449476835027976,
    -0.84376688267270860104,
    -0.83672593816886873550,
    -0.82952219463740140018,
    -0.82215625436498040737,
    -0.81462878765513741344,
    -0.80694053195021761186,
    -0.79909229096084140180,
    -0.79108493379984836143,
    -0.78291939411828301639,
    -0.77459666924148337704,
    -0.76611781930376009072,
    -0.75748396638051363793,
    -0.74869629361693660282,
    -0.73975604435269475868,
    -0.73066452124218126133,
    -0.72142308537009891548,
    -0.71203315536225203459,
    -0.70249620649152707861,
    -0.69281376977911470289,
    -0.68298743109107922809,
    -0.67301883023041847920,
    -0.66290966002478059546,
    -0.65266166541001749610,
    -0.64227664250975951377,
    -0.63175643771119423041,
    -0.62110294673722640294,
    -0.61031811371518640016,
    -0.59940393024224289297,
    -0.58836243444766254143,
    -0.57719571005204581484,
    -0.56590588542365442262,
    -0.55449513263193254887,
    -0.54296566649831149049,
    -0.53131974364437562397,
    -0.51955966153745702199,
    -0.50768775753371660215,
    -0.49570640791876146017,
    -0.48361802694584102756,
    -0.47142506587165887693,
    -0.45913001198983233287,
    -0.44673538766202847374,
    -0.43424374934680255800,
    -0.42165768662616330006,
    -0.40897982122988867241,
    -0.39621280605761593918,
    -0.38335932419873034692,
    -0.37042208795007823014,
    -0.35740383783153215238,
    -0.34430734159943802278,
    -0.33113539325797683309,
    -0.31789081206847668318,
    -0.30457644155671404334,
    -0.29119514851824668196,
    -0.27774982202182431507,
    -0.26424337241092676194,
    -0.25067873030348317661,
    -0.23705884558982972721,
    -0.22338668642896688163,
    -0.20966523824318119477,
    -0.19589750271110015392,
    -0.18208649675925219825,
    -0.16823525155220746498,
    -0.15434681148137810869,
    -0.14042423315256017459,
    -0.12647058437230196685,
    -0.11248894313318662575,
    -0.098482396598119202090,
    -0.084454040083710883710,
    -0.070406976042855179063,
    -0.056344313046592789972,
    -0.042269164765363603212,
    -0.028184648949745694339,
    -0.014093886410782462614,
    0.0,
    0.014093886410782462614,
    0.028184648949745694339,
    0.042269164765363603212,
    0.056344313046592789972,
    0.070406976042855179063,
    0.084454040083710883710,
    0.098482396598119202090,
    0.11248894313318662575,
    0.12647058437230196685,
    0.14042423315256017459,
    0.15434681148137810869,
    0.16823525155220746498,
    0.18208649675925219825,
    0.19589750271110015392,
    0.20966523824318119477,
    0.22338668642896688163,
    0.23705884558982972721,
    0.25067873030348317661,
    0.26424337241092676194,
    0.27774982202182431507,
    0.29119514851824668196,
    0.30457644155671404334,
    0.31789081206847668318,
    0.33113539325797683309,
    0.34430734159943802278,
    0.35740383783153215238,
    0.37042208795007823014,
    0.38335932419873034692,
    0.39621280605761593918,
    0.40897982122988867241,
    0.42165768662616330006,
    0.43424374934680255800,
    0.44673538766202847374,
    0.45913001198983233287,
    0.47142506587165887693,
    0.48361802694584102756,
    0.49570640791876146017,
    0.50768775753371660215,
    0.51955966153745702199,
    0.53131974364437562397,
    0.54296566649831149049,
    0.55449513263193254887,
    0.56590588542365442262,
    0.57719571005204581484,
    0.58836243444766254143,
    0.59940393024224289297,
    0.61031811371518640016,
    0.62110294673722640294,
    0.63175643771119423041,
    0.64227664250975951377,
    0.65266166541001749610,
    0.66290966002478059546,
    0.67301883023041847920,
    0.68298743109107922809,
    0.69281376977911470289,
    0.70249620649152707861,
    0.71203315536225203459,
    0.72142308537009891548,
    0.73066452124218126133,
    0.73975604435269475868,
    0.74869629361693660282,
    0.75748396638051363793,
    0.76611781930376009072,
    0.77459666924148337704,
    0.78291939411828301639,
    0.79108493379984836143,
    0.79909229096084140180,
    0.80694053195021761186,
    0.81462878765513741344,
    0.82215625436498040737,
    0.82952219463740140018,
    0.83672593816886873550,
    0.84376688267270860104,
    0.85064449476835027976,
    0.85735831088623215653,
    0.86390793819369047715,
    0.87029305554811390585,
    0.87651341448470526974,
    0.88256884024734190684,
    0.88845923287225699889,
    0.89418456833555902286,
    0.89974489977694003664,
    0.90514035881326159519,
    0.91037115695700429250,
    0.91543758715576504064,
    0.92034002547001242073,
    0.92507893290707565236,
    0.92965485742974005667,
    0.93406843615772578800,
    0.93832039777959288365,
    0.94241156519108305981,
    0.94634285837340290515,
    0.95011529752129487656,
    0.95373000642576113641,
    0.95718821610986096274,
    0.96049126870802028342,
    0.96364062156981213252,
    0.96663785155841656709,
    0.96948465950245923177,
    0.97218287474858179658,
    0.97473445975240266776,
    0.97714151463970571416,
    0.97940628167086268381,
    0.98153114955374010687,
    0.98351865757863272876,
    0.98537149959852037111,
    0.98709252795403406719,
    0.98868475754742947994,
    0.99015137040077015918,
    0.99149572117810613240,
    0.99272134428278861533,
    0.99383196321275502221,
    0.99483150280062100052,
    0.99572410469840718851,
    0.99651414591489027385,
    0.99720625937222195908,
    0.99780535449595727456,
    0.99831663531840739253,
    0.99874561446809511470,
    0.99909812496766759766,
    0.99938033802502358193,
    0.99959879967191068325,
    0.99976049092443204733,
    0.99987288812035761194,
    0.99994399620705437576,
    0.99998243035489159858,
    0.99999759637974846462,
];

static WEIGHTS_1: [f64; 1] = [
    2.0,
];

static WEIGHTS_3: [f64; 3] = [
    0.555555555555555555556,
    0.888888888888888888889,
    0.555555555555555555556,
];

static WEIGHTS_7: [f64; 7] = [
    0.104656226026467265194,
    0.268488089868333440729,
    0.401397414775962222905,
    0.450916538658474142345,
    0.401397414775962222905,
    0.268488089868333440729,
    0.104656226026467265194,
];

static WEIGHTS_15: [f64; 15] = [
    0.0170017196299402603390,
    0.0516032829970797396969,
    0.0929271953151245376859,
    0.134415255243784220360,
    0.171511909136391380787,
    0.200628529376989021034,
    0.219156858401587496404,
    0.225510499798206687386,
    0.219156858401587496404,
    0.200628529376989021034,
    0.171511909136391380787,
    0.134415255243784220360,
    0.0929271953151245376859,
    0.0516032829970797396969,
    0.0170017196299402603390,
];

static WEIGHTS_31: [f64; 31] = [
    0.00254478079156187441540,
    0.00843456573932110624631,
    0.0164460498543878109338,
    0.0258075980961766535646,
    0.0359571033071293220968,
    0.0464628932617579865414,
    0.0569795094941233574122,
    0.0672077542959907035404,
    0.0768796204990035310427,
    0.0857559200499903511542,
    0.0936271099812644736167,
    0.100314278611795578771,
    0.105669893580234809744,
    0.109578421055924638237,
    0.111956873020953456880,
    0.112755256720768691607,
    0.111956873020953456880,
    0.109578421055924638237,
    0.105669893580234809744,
    0.100314278611795578771,
    0.0936271099812644736167,
    0.0857559200499903511542,
    0.0768796204990035310427,
    0.0672077542959907035404,
    0.0569795094941233574122,
    0.0464628932617579865414,
    0.0359571033071293220968,
    0.0258075980961766535646,
    0.0164460498543878109338,
    0.00843456573932110624631,
    0.00254478079156187441540,
];

static WEIGHTS_63: [f64; 63] = [
    0.000363221481845530659694,
    0.00126515655623006801137,
    0.00257904979468568827243,
    0.00421763044155885483908,
    0.00611550682211724633968,
    0.00822300795723592966926,
    0.0104982469096213218983,
    0.0129038001003512656260,
    0.0154067504665594978021,
    0.0179785515681282703329,
    0.0205942339159127111492,
    0.0232314466399102694433,
    0.0258696793272147469108,
    0.0284897547458335486125,
    0.0310735511116879648799,
    0.0336038771482077305417,
    0.0360644327807825726401,
    0.0384398102494555320386,
    0.0407155101169443189339,
    0.0428779600250077344929,
    0.0449145316536321974143,
    0.0468135549906280124026,
    0.0485643304066731987159,
    0.0501571393058995374137,
    0.0515832539520484587768,
    0.0528349467901165198621,
    0.0539054993352660639269,
    0.0547892105279628650322,
    0.0554814043565593639878,
    0.0559784365104763194076,
    0.0562776998312543012726,
    0.0563776283603847173877,
    0.0562776998312543012726,
    0.0559784365104763194076,
    0.0554814043565593639878,
    0.0547892105279628650322,
    0.0539054993352660639269,
    0.0528349467901165198621,
    0.0515832539520484587768,
    0.0501571393058995374137,
    0.0485643304066731987159,
    0.0468135549906280124026,
    0.0449145316536321974143,
    0.0428779600250077344929,
    0.0407155101169443189339,
    0.0384398102494555320386,
    0.0360644327807825726401,
    0.0336038771482077305417,
    0.0310735511116879648799,
    0.0284897547458335486125,
    0.0258696793272147469108,
    0.0232314466399102694433,
    0.0205942339159127111492,
    0.0179785515681282703329,
    0.0154067504665594978021,
    0.0129038001003512656260,
    0.0104982469096213218983,
    0.00822300795723592966926,
    0.00611550682211724633968,
    0.00421763044155885483908,
    0.00257904979468568827243,
    0.00126515655623006801137,
    0.000363221481845530659694,
];

static WEIGHTS_127: [f64; 127] = [
    0.0000505360952078625176247,
    0.000180739564445388357820,
    0.000377746646326984660274,
    0.000632607319362633544219,
    0.000938369848542381500794,
    0.00128952408261041739210,
    0.00168114286542146990631,
    0.00210881524572663287933,
    0.00256876494379402037313,
    0.00305775341017553113613,
    0.00357289278351729964938,
    0.00411150397865469304717,
    0.00467105037211432174741,
    0.00524912345480885912513,
    0.00584344987583563950756,
    0.00645190005017573692280,
    0.00707248999543355546805,
    0.00770337523327974184817,
    0.00834283875396815770558,
    0.00898927578406413572328,
    0.00964117772970253669530,
    0.0102971169579563555237,
    0.0109557333878379016480,
    0.0116157233199551347270,
    0.0122758305600827700870,
    0.0129348396636073734547,
    0.0135915710097655467896,
    0.0142448773729167743063,
    0.0148936416648151820348,
    0.0155367755558439824399,
    0.0161732187295777199419,
    0.0168019385741038652709,
    0.0174219301594641737472,
    0.0180322163903912863201,
    0.0186318482561387901863,
    0.0192199051247277660193,
    0.0197954950480974994880,
    0.0203577550584721594669,
    0.0209058514458120238522,
    0.0214389800125038672465,
    0.0219563663053178249393,
    0.0224572658268160987071,
    0.0229409642293877487608,
    0.0234067774953140062013,
    0.0238540521060385400804,
    0.0242821652033365993580,
    0.0246905247444876769091,
    0.0250785696529497687068,
    0.0254457699654647658126,
    0.0257916269760242293884,
    0.0261156733767060976805,
    0.0264174733950582599310,
    0.0266966229274503599062,
    0.0269527496676330319634,
    0.0271855132296247918192,
    0.0273946052639814325161,
    0.0275797495664818730349,
    0.0277407021782796819939,
    0.0278772514766137016085,
    0.0279892182552381597038,
    0.0280764557938172466068,
    0.0281388499156271506363,
    0.0281763190330166021307,
    0.0281888141801923586938,
    0.0281763190330166021307,
    0.0281388499156271506363,
    0.0280764557938172466068,
    0.0279892182552381597038,
    0.0278772514766137016085,
    0.0277407021782796819939,
    0.0275797495664818730349,
    0.0273946052639814325161,
    0.0271855132296247918192,
    0.0269527496676330319634,
    0.0266966229274503599062,
    0.0264174733950582599310,
    0.0261156733767060976805,
    0.0257916269760242293884,
    0.0254457699654647658126,
    0.0250785696529497687068,
    0.0246905247444876769091,
    0.0242821652033365993580,
    0.0238540521060385400804,
    0.0234067774953140062013,
    0.0229409642293877487608,
    0.0224572658268160987071,
    0.0219563663053178249393,
    0.0214389800125038672465,
    0.0209058514458120238522,
    0.0203577550584721594669,
    0.0197954950480974994880,
    0.0192199051247277660193,
    0.0186318482561387901863,
    0.0180322163903912863201,
    0.0174219301594641737472,
    0.0168019385741038652709,
    0.0161732187295777199419,
    0.0155367755558439824399,
    0.0148936416648151820348,
    0.0142448773729167743063,
    0.0135915710097655467896,
    0.0129348396636073734547,
    0.0122758305600827700870,
    0.0116157233199551347270,
    0.0109557333878379016480,
    0.0102971169579563555237,
    0.00964117772970253669530,
    0.00898927578406413572328,
    0.00834283875396815770558,
    0.00770337523327974184817,
    0.00707248999543355546805,
    0.00645190005017573692280,
    0.00584344987583563950756,
    0.00524912345480885912513,
    0.00467105037211432174741,
    0.00411150397865469304717,
    0.00357289278351729964938,
    0.00305775341017553113613,
    0.00256876494379402037313,
    0.00210881524572663287933,
    0.00168114286542146990631,
    0.00128952408261041739210,
    0.000938369848542381500794,
    0.000632607319362633544219,
    0.000377746646326984660274,
    0.000180739564445388357820,
    0.0000505360952078625176247,
];

static WEIGHTS_255: [f64; 255] = [
    0.69379364324108267170e-05,
    0.25157870384280661489e-04,
    0.53275293669780613125e-04,
    0.90372734658751149261e-04,
    0.13575491094922871973e-03,
    0.18887326450650491366e-03,
    0.24921240048299729402e-03,
    0.31630366082226447689e-03,
    0.38974528447328229322e-03,
    0.46918492424785040975e-03,
    0.55429531493037471492e-03,
    0.64476204130572477933e-03,
    0.74028280424450333046e-03,
    0.84057143271072246365e-03,
    0.94536151685852538246e-03,
    0.10544076228633167722e-02,
    0.11674841174299594077e-02,
    0.12843824718970101768e-02,
    0.14049079956551446427e-02,
    0.15288767050877655684e-02,
    0.16561127281544526052e-02,
    0.17864463917586498247e-02,
    0.19197129710138724125e-02,
    0.20557519893273465236e-02,
    0.21944069253638388388e-02,
    0.23355251860571608737e-02,
    0.24789582266575679307e-02,
    0.26245617274044295626e-02,
    0.27721957645934509940e-02,
    0.29217249379178197538e-02,
    0.30730184347025783234e-02,
    0.32259500250878684614e-02,
    0.33803979910869203823e-02,
    0.35362449977167777340e-02,
    0.36933779170256508183e-02,
    0.38516876166398709241e-02,
    0.40110687240750233989e-02,
    0.41714193769840788528e-02,
    0.43326409680929828545e-02,
    0.44946378920320678616e-02,
    0.46573172997568547773e-02,
    0.48205888648512683476e-02,
    0.49843645647655386012e-02,
    0.51485584789781777618e-02,
    0.53130866051870565663e-02,
    0.54778666939189508240e-02,
    0.56428181013844441585e-02,
    0.58078616599775673635e-02,
    0.59729195655081658049e-02,
    0.61379152800413850435e-02,
    0.63027734490857587172e-02,
    0.64674198318036867274e-02,
    0.66317812429018878941e-02,
    0.67957855048827733948e-02,
    0.69593614093904229394e-02,
    0.71224386864583871532e-02,
    0.72849479805538070639e-02,
    0.74468208324075910174e-02,
    0.76079896657190565832e-02,
    0.77683877779219912200e-02,
    0.79279493342948491103e-02,
    0.80866093647888599710e-02,
    0.82443037630328680306e-02,
    0.84009692870519326354e-02,
    0.85565435613076896192e-02,
    0.87109650797320868736e-02,
    0.88641732094824942641e-02,
    0.90161081951956431600e-02,
    0.91667111635607884067e-02,
    0.93159241280693950932e-02,
    0.94636899938300652943e-02,
    0.96099525623638830097e-02,
    0.97546565363174114611e-02,
    0.98977475240487497440e-02,
    0.10039172044056840798e-01,
    0.10178877529236079733e-01,
    0.10316812330947621682e-01,
    0.10452925722906011926e-01,
    0.10587167904885197931e-01,
    0.10719490006251933623e-01,
    0.10849844089337314099e-01,
    0.10978183152658912470e-01,
    0.11104461134006926537e-01,
    0.11228632913408049354e-01,
    0.11350654315980596602e-01,
    0.11470482114693874380e-01,
    0.11588074033043952568e-01,
    0.11703388747657003101e-01,
    0.11816385890830235763e-01,
    0.11927026053019270040e-01,
    0.12035270785279562630e-01,
    0.12141082601668299679e-01,
    0.12244424981611985899e-01,
    0.12345262372243838455e-01,
    0.12443560190714035263e-01,
    0.12539284826474884353e-01,
    0.12632403643542078765e-01,
    0.12722884982732382906e-01,
    0.12810698163877361967e-01,
    0.12895813488012114694e-01,
    0.12978202239537399286e-01,
    0.13057836688353048840e-01,
    0.13134690091960152836e-01,
    0.13208736697529129966e-01,
    0.13279951743930530650e-01,
    0.13348311463725179953e-01,
    0.13413793085110098513e-01,
    0.13476374833816515982e-01,
    0.13536035934956213614e-01,
    0.13592756614812395910e-01,
    0.13646518102571291428e-01,
    0.13697302631990716258e-01,
    0.13745093443001896632e-01,
    0.13789874783240936517e-01,
    0.13831631909506428676e-01,
    0.13870351089139840997e-01,
    0.13906019601325461264e-01,
    0.13938625738306850804e-01,
    0.13968158806516938516e-01,
    0.13994609127619079852e-01,
    0.14017968039456608810e-01,
    0.14038227896908623303e-01,
    0.14055382072649964277e-01,
    0.14069424957813575318e-01,
    0.14080351962553661325e-01,
    0.14088159516508301065e-01,
    0.14092845069160408355e-01,
    0.14094407090096179347e-01,
    0.14092845069160408355e-01,
    0.14088159516508301065e-01,
    0.14080351962553661325e-01,
    0.14069424957813575318e-01,
    0.14055382072649964277e-01,
    0.14038227896908623303e-01,
    0.14017968039456608810e-01,
    0.13994609127619079852e-01,
    0.13968158806516938516e-01,
    0.13938625738306850804e-01,
    0.13906019601325461264e-01,
    0.13870351089139840997e-01,
    0.13831631909506428676e-01,
    0.13789874783240936517e-01,
    0.13745093443001896632e-01,
    0.13697302631990716258e-01,
    0.13646518102571291428e-01,
    0.13592756614812395910e-01,
    0.13536035934956213614e-01,
    0.13476374833816515982e-01,
    0.13413793085110098513e-01,
    0.13348311463725179953e-01,
    0.13279951743930530650e-01,
    0.13208736697529129966e-01,
    0.13134690091960152836e-01,
    0.13057836688353048840e-01,
    0.12978202239537399286e-01,
    0.12895813488012114694e-01,
    0.12810698163877361967e-01,
    0.12722884982732382906e-01,
    0.12632403643542078765e-01,
    0.12539284826474884353e-01,
    0.12443560190714035263e-01,
    0.12345262372243838455e-01,
    0.12244424981611985899e-01,
    0.12141082601668299679e-01,
    0.12035270785279562630e-01,
    0.11927026053019270040e-01,
    0.11816385890830235763e-01,
    0.11703388747657003101e-01,
    0.11588074033043952568e-01,
    0.11470482114693874380e-01,
    0.11350654315980596602e-01,
    0.11228632913408049354e-01,
    0.11104461134006926537e-01,
    0.10978183152658912470e-01,
    0.10849844089337314099e-01,
    0.10719490006251933623e-01,
    0.10587167904885197931e-01,
    0.10452925722906011926e-01,
    0.10316812330947621682e-01,
    0.10178877529236079733e-01,
    0.10039172044056840798e-01,
    0.98977475240487497440e-02,
    0.97546565363174114611e-02,
    0.96099525623638830097e-02,
    0.94636899938300652943e-02,
    0.93159241280693950932e-02,
    0.91667111635607884067e-02,
    0.90161081951956431600e-02,
    0.88641732094824942641e-02,
    0.87109650797320868736e-02,
    0.85565435613076896192e-02,
    0.84009692870519326354e-02,
    0.82443037630328680306e-02,
    0.80866093647888599710e-02,
    0.79279493342948491103e-02,
    0.77683877779219912200e-02,
    0.76079896657190565832e-02,
    0.74468208324075910174e-02,
    0.72849479805538070639e-02,
    0.71224386864583871532e-02,
    0.69593614093904229394e-02,
    0.67957855048827733948e-02,
    0.66317812429018878941e-02,
    0.64674198318036867274e-02,
    0.63027734490857587172e-02,
    0.61379152800413850435e-02,
    0.59729195655081658049e-02,
    0.58078616599775673635e-02,
    0.56428181013844441585e-02,
    0.54778666939189508240e-02,
    0.53130866051870565663e-02,
    0.51485584789781777618e-02,
    0.49843645647655386012e-02,
    0.48205888648512683476e-02,
    0.46573172997568547773e-02,
    0.44946378920320678616e-02,
    0.43326409680929828545e-02,
    0.41714193769840788528e-02,
    0.40110687240750233989e-02,
    0.38516876166398709241e-02,
    0.36933779170256508183e-02,
    0.35362449977167777340e-02,
    0.33803979910869203823e-02,
    0.32259500250878684614e-02,
    0.30730184347025783234e-02,
    0.29217249379178197538e-02,
    0.27721957645934509940e-02,
    0.26245617274044295626e-02,
    0.24789582266575679307e-02,
    0.23355251860571608737e-02,
    0.21944069253638388388e-02,
    0.20557519893273465236e-02,
    0.19197129710138724125e-02,
    0.17864463917586498247e-02,
    0.16561127281544526052e-02,
    0.15288767050877655684e-02,
    0.14049079956551446427e-02,
    0.12843824718970101768e-02,
    0.11674841174299594077e-02,
    0.10544076228633167722e-02,
    0.94536151685852538246e-03,
    0.84057143271072246365e-03,
    0.74028280424450333046e-03,
    0.64476204130572477933e-03,
    0.55429531493037471492e-03,
    0.46918492424785040975e-03,
    0.38974528447328229322e-03,
    0.31630366082226447689e-03,
    0.24921240048299729402e-03,
    0.18887326450650491366e-03,
    0.13575491094922871973e-03,
    0.90372734658751149261e-04,
    0.53275293669780613125e-04,
    0.25157870384280661489e-04,
    0.69379364324108267170e-05,
];

pub(crate) static WEIGHTS: [&[f64]; 8] = [
    &WEIGHTS_1,
    &WEIGHTS_3,
    &WEIGHTS_7,
    &WEIGHTS_15,
    &WEIGHTS_31,
    &WEIGHTS_63,
    &WEIGHTS_127,
    &WEIGHTS_255,
];
